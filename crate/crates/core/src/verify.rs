//! Batch checks of the algebraic identities, grouped and filterable.
//!
//! Each group compares a direct matrix computation against its closed form
//! for every index tuple and reports one [`Verdict`] per identity family
//! with the largest relative residual seen.

use std::fmt;
use std::str::FromStr;

use crate::dual::{triple_matrix, triple_inner_closed, DualAlgebra, Flavor};
use crate::lattice::{self, check_primitivity, classify_pairs, MixedProducts};
use crate::linalg::{self, Mat};
use crate::scheme::Scheme;
use crate::tol::Tolerances;
use crate::verdict::Verdict;

/// Identity groups with their filter keys.
pub const GROUPS: [(&str, &str); 15] = [
    ("2.1", "distance matrix product law"),
    ("2.2", "intersection number symmetries"),
    ("2.3", "idempotent expansions"),
    ("2.4", "Krein parameters"),
    ("2.5", "dual algebra expansions"),
    ("3.1", "triple products E*AE* and EA*E"),
    ("3.2", "vanishing triple products"),
    ("3.3", "triple products AE*A"),
    ("4.1", "traces"),
    ("4.2", "orthogonality of A, E, A*, E*"),
    ("4.3", "<A_i, A*_j>"),
    ("5.1", "inner products of mixed products"),
    ("5.4", "orthogonality of pair blocks"),
    ("5.6", "Gram matrices of mixed pairs"),
    ("5.9", "degenerate pairs"),
];

const PRIMITIVITY_GROUP: &str = "5.11";

/// Selects groups by exact key, `prefix.*`, or `all`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupFilter {
    All,
    Exact(String),
    Prefix(String),
}

impl GroupFilter {
    pub fn matches(&self, key: &str) -> bool {
        match self {
            GroupFilter::All => true,
            GroupFilter::Exact(k) => k == key,
            GroupFilter::Prefix(p) => key.split('.').next() == Some(p.as_str()),
        }
    }

    pub fn keys() -> impl Iterator<Item = &'static str> {
        GROUPS.iter().map(|g| g.0).chain(std::iter::once(PRIMITIVITY_GROUP))
    }
}

impl FromStr for GroupFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let filter = if s == "all" || s == "*" {
            GroupFilter::All
        } else if let Some(prefix) = s.strip_suffix(".*") {
            GroupFilter::Prefix(prefix.to_string())
        } else {
            GroupFilter::Exact(s.to_string())
        };
        if GroupFilter::keys().any(|k| filter.matches(k)) {
            Ok(filter)
        } else {
            Err(format!("`{s}` selects no identity group"))
        }
    }
}

impl fmt::Display for GroupFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFilter::All => f.write_str("all"),
            GroupFilter::Exact(k) => f.write_str(k),
            GroupFilter::Prefix(p) => write!(f, "{p}.*"),
        }
    }
}

/// Running maximum of relative residuals over many identities.
struct Tally {
    worst: f64,
    count: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, count: 0 }
    }

    fn add(&mut self, direct: f64, closed: f64, scale: f64) {
        self.worst = self.worst.max((direct - closed).abs() / scale.max(1.0));
        self.count += 1;
    }

    fn add_exact(&mut self, ok: bool) {
        if !ok {
            self.worst = self.worst.max(1.0);
        }
        self.count += 1;
    }

    fn verdict(self, key: &str, name: &str, tol: f64) -> Verdict {
        Verdict::residual(format!("[{key}] {name}"), self.worst, tol)
            .with_detail(format!("{} identities", self.count))
    }
}

fn kron(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Runs every selected group.
pub fn run(scheme: &Scheme, da: &DualAlgebra, filter: &GroupFilter, tol: &Tolerances) -> Vec<Verdict> {
    let mut out = Vec::new();
    let prods = MixedProducts::new(scheme, da);
    for (key, _) in GROUPS {
        if filter.matches(key) {
            out.extend(run_group(scheme, da, &prods, key, tol));
        }
    }
    if filter.matches(PRIMITIVITY_GROUP) {
        let key = PRIMITIVITY_GROUP;
        out.push(match classify_pairs(&scheme.spec, &scheme.tol) {
            Ok(pc) => match check_primitivity(&scheme.graph, &pc) {
                Ok(pr) => Verdict::flag(
                    format!("[{key}] P = 0 iff every distance graph is connected"),
                    true,
                    format!("P = {}, primitive = {}", pc.p, pr.primitive),
                ),
                Err(e) => Verdict::failed(format!("[{key}] P = 0 iff primitive"), e.to_string()),
            },
            Err(e) => Verdict::failed(format!("[{key}] pair classification"), e.to_string()),
        });
    }
    out
}

fn run_group(scheme: &Scheme, da: &DualAlgebra, prods: &MixedProducts, key: &str, tol: &Tolerances) -> Vec<Verdict> {
    let d = scheme.diameter();
    let n = scheme.n() as f64;
    let ia = &scheme.ia;
    let spec = &scheme.spec;
    let bm = &scheme.bm;
    let r = tol.residual;
    let idx = || 0..=d;
    match key {
        "2.1" => {
            let err = crate::bm::product_law_error(&bm.a_int, ia);
            vec![Verdict::residual(format!("[{key}] A_iA_j = Σ_h p^h_ij A_h (exact)"), err as f64, 0.0)
                .with_detail(format!("{} products", (d + 1) * (d + 1)))]
        }
        "2.2" => {
            let mut sym = Tally::new();
            let mut rows = Tally::new();
            let mut base = Tally::new();
            for h in idx() {
                for i in idx() {
                    rows.add_exact((0..=d).map(|j| ia.p(h, i, j)).sum::<u64>() == ia.k[i]);
                    for j in idx() {
                        sym.add_exact(ia.p(h, i, j) == ia.p(h, j, i));
                        sym.add_exact(ia.k[h] * ia.p(h, i, j) == ia.k[i] * ia.p(i, h, j));
                    }
                    base.add_exact(ia.p(h, 0, i) == u64::from(h == i));
                    base.add_exact(ia.p(0, h, i) == if h == i { ia.k[h] } else { 0 });
                }
            }
            for i in idx() {
                base.add_exact(ia.a[i] + ia.b_at(i) + ia.c_at(i) == ia.valency());
            }
            vec![
                sym.verdict(key, "p^h_ij = p^h_ji and k_h p^h_ij = k_i p^i_hj (exact)", 0.0),
                rows.verdict(key, "Σ_j p^h_ij = k_i (exact)", 0.0),
                base.verdict(key, "p^h_0j = δ_hj, p^0_ij = δ_ij k_i, a_i + b_i + c_i = k (exact)", 0.0),
            ]
        }
        "2.3" => {
            let mut expand = Tally::new();
            let mut eig = Tally::new();
            for j in idx() {
                let coeffs: Vec<f64> = idx().map(|i| ia.k[j] as f64 * spec.u(j, i)).collect();
                let recon = linalg::combination(&coeffs, &bm.e);
                expand.add(linalg::max_abs(&(recon - &bm.a[j])), 0.0, 1.0);
                for i in idx() {
                    let lhs = &bm.a[j] * &bm.e[i];
                    let rhs = &bm.e[i] * (ia.k[j] as f64 * spec.u(j, i));
                    eig.add(linalg::max_abs(&(lhs - rhs)), 0.0, ia.k[j] as f64);
                }
            }
            vec![
                expand.verdict(key, "A_j = k_j Σ_i u_j(θ_i) E_i", r),
                eig.verdict(key, "A_j E_i = k_j u_j(θ_i) E_i", r),
            ]
        }
        "2.4" => {
            let mut rows = Tally::new();
            let mut nonneg = Tally::new();
            let mut kron0 = Tally::new();
            for h in idx() {
                for i in idx() {
                    let sum: f64 = idx().map(|j| bm.q.q(h, i, j)).sum();
                    rows.add(sum, spec.m[i] as f64, spec.m[i] as f64);
                    kron0.add(bm.q.q(h, 0, i), kron(h, i), 1.0);
                    for j in idx() {
                        nonneg.add(bm.q.q(h, i, j).min(0.0), 0.0, 1.0);
                    }
                }
            }
            vec![
                rows.verdict(key, "Σ_j q^h_ij = m_i", r),
                kron0.verdict(key, "q^h_0j = δ_hj", r),
                nonneg.verdict(key, "q^h_ij >= 0", r),
            ]
        }
        "2.5" => {
            let mut recon = Tally::new();
            let mut prod = Tally::new();
            for j in idx() {
                for y in 0..scheme.n() {
                    let i = scheme.graph.dist(da.x, y);
                    recon.add(da.astar[j][y], spec.m[j] as f64 * spec.u(i, j), spec.m[j] as f64);
                    recon.add(n * bm.e[j][(da.x, y)], da.astar[j][y], spec.m[j] as f64);
                }
                for i in idx() {
                    let lhs = da.astar[i].component_mul(&da.astar[j]);
                    let mut rhs = nalgebra::DVector::zeros(scheme.n());
                    for h in idx() {
                        rhs.axpy(bm.q.q(h, i, j), &da.astar[h], 1.0);
                    }
                    let scale = lhs.amax();
                    prod.add((lhs - rhs).amax(), 0.0, scale);
                }
            }
            vec![
                recon.verdict(key, "A*_j = m_j Σ_i u_i(θ_j) E*_i = |X| diag(E_j row x)", r),
                prod.verdict(key, "A*_i A*_j = Σ_h q^h_ij A*_h", r),
            ]
        }
        "3.1" | "3.3" => {
            let flavors: &[Flavor] = if key == "3.1" {
                &[Flavor::EstarAEstar, Flavor::EAstarE]
            } else {
                &[Flavor::AEstarA]
            };
            flavors
                .iter()
                .map(|&flavor| {
                    let triples: Vec<(usize, usize, usize)> = idx()
                        .flat_map(|i| idx().flat_map(move |j| idx().map(move |h| (i, j, h))))
                        .collect();
                    let mats: Vec<Mat> = triples.iter().map(|&t| triple_matrix(scheme, da, flavor, t)).collect();
                    let norms: Vec<f64> = mats.iter().map(linalg::norm).collect();
                    let mut tally = Tally::new();
                    for (a, &lhs) in triples.iter().enumerate() {
                        for (b, &rhs) in triples.iter().enumerate() {
                            let direct = linalg::inner(&mats[a], &mats[b]);
                            let closed = triple_inner_closed(scheme, flavor, lhs, rhs);
                            tally.add(direct, closed, norms[a] * norms[b]);
                        }
                    }
                    tally.verdict(key, &format!("<{flavor}, {flavor}> closed form vs trace"), r)
                })
                .collect()
        }
        "3.2" => [Flavor::EstarAEstar, Flavor::EAstarE]
            .into_iter()
            .map(|flavor| {
                let mut tally = Tally::new();
                for h in idx() {
                    for i in idx() {
                        for j in idx() {
                            let m = triple_matrix(scheme, da, flavor, (i, h, j));
                            let is_zero = linalg::max_abs(&m) <= tol.scaled(1.0);
                            let param_zero = match flavor {
                                Flavor::EstarAEstar => ia.p(h, i, j) == 0,
                                _ => bm.q.q(h, i, j).abs() <= tol.scaled(1.0),
                            };
                            tally.add_exact(is_zero == param_zero);
                        }
                    }
                }
                let param = if flavor == Flavor::EstarAEstar { "p^h_ij" } else { "q^h_ij" };
                tally.verdict(key, &format!("{flavor} vanishes iff {param} = 0"), 0.0)
            })
            .collect(),
        "4.1" => {
            let mut t = Tally::new();
            for i in idx() {
                let delta = kron(i, 0) * n;
                t.add(bm.a[i].trace(), delta, n);
                t.add(bm.e[i].trace(), spec.m[i] as f64, spec.m[i] as f64);
                t.add(da.astar[i].sum(), delta, n);
                t.add(da.estar[i].sum(), ia.k[i] as f64, ia.k[i] as f64);
            }
            vec![t.verdict(key, "tr A_i, tr E_i, tr A*_i, tr E*_i", r)]
        }
        "4.2" => {
            let mut t = Tally::new();
            for i in idx() {
                for j in idx() {
                    let dl = kron(i, j);
                    t.add(linalg::inner(&bm.a[i], &bm.a[j]), dl * ia.k[i] as f64 * n, ia.k[i].max(ia.k[j]) as f64 * n);
                    t.add(linalg::inner(&bm.e[i], &bm.e[j]), dl * spec.m[i] as f64, spec.m[i].max(spec.m[j]) as f64);
                    t.add(
                        da.astar[i].dot(&da.astar[j]),
                        dl * spec.m[i] as f64 * n,
                        spec.m[i].max(spec.m[j]) as f64 * n,
                    );
                    t.add(da.estar[i].dot(&da.estar[j]), dl * ia.k[i] as f64, ia.k[i] as f64);
                }
            }
            vec![t.verdict(key, "<A_i,A_j>, <E_i,E_j>, <A*_i,A*_j>, <E*_i,E*_j>", r)]
        }
        "4.3" => {
            let mut t = Tally::new();
            for i in idx() {
                for j in idx() {
                    let direct: f64 = (0..scheme.n()).map(|y| bm.a[i][(y, y)] * da.astar[j][y]).sum();
                    let closed = kron(i, 0) * kron(j, 0) * n * ia.k[i] as f64;
                    t.add(direct, closed, n * (ia.k[i] as f64 * spec.m[j] as f64).sqrt());
                }
            }
            vec![t.verdict(key, "<A_i, A*_j> = δ_i0 δ_0j |X| k_i", r)]
        }
        "5.1" => {
            let mut cross = Tally::new();
            let mut same = Tally::new();
            let norm = |i: usize, j: usize| (n * ia.k[i] as f64 * spec.m[j] as f64).sqrt();
            for i in idx() {
                for j in idx() {
                    for rr in idx() {
                        for s in idx() {
                            let scale = norm(i, j) * norm(s, rr);
                            let closed = kron(i, s) * kron(j, rr) * n * ia.k[i] as f64 * spec.m[j] as f64 * spec.u(i, j);
                            cross.add(linalg::inner(&prods.right[i][j], &prods.left[s][rr]), closed, scale);
                            let closed = kron(i, rr) * kron(j, s) * n * ia.k[i] as f64 * spec.m[j] as f64;
                            same.add(linalg::inner(&prods.right[i][j], &prods.right[rr][s]), closed, norm(i, j) * norm(rr, s));
                        }
                    }
                }
            }
            vec![
                cross.verdict(key, "<A_iA*_j, A*_rA_s> = δ_is δ_jr |X| k_i m_j u_i(θ_j)", r),
                same.verdict(key, "<A_iA*_j, A_rA*_s> = δ_ir δ_js |X| k_i m_j", r),
            ]
        }
        "5.4" => vec![lattice::pair_blocks_orthogonal(scheme, prods, tol)]
            .into_iter()
            .map(|v| Verdict { name: format!("[{key}] {}", v.name), ..v })
            .collect(),
        "5.6" => {
            let mut worst = 0.0f64;
            let mut count = 0;
            for i in idx() {
                for j in idx() {
                    worst = worst.max(lattice::gram_h(scheme, prods, i, j).residual());
                    count += 1;
                }
            }
            vec![Verdict::residual(
                format!("[{key}] H_ij = |X| k_i m_j [[1,u],[u,1]], det and ± norms"),
                worst,
                r,
            )
            .with_detail(format!("{count} pairs"))]
        }
        "5.9" => match classify_pairs(spec, &scheme.tol) {
            Ok(pc) => lattice::degenerate_pair_verdicts(&pc, prods, tol)
                .into_iter()
                .map(|v| Verdict { name: format!("[{key}] {}", v.name), ..v })
                .collect(),
            Err(e) => vec![Verdict::failed(format!("[{key}] pair classification"), e.to_string())],
        },
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_named, Family};

    #[test]
    fn filter_parsing() {
        assert_eq!("5.1".parse::<GroupFilter>().unwrap(), GroupFilter::Exact("5.1".into()));
        let f: GroupFilter = "4.*".parse().unwrap();
        assert!(f.matches("4.2") && !f.matches("5.1"));
        assert!("5.*".parse::<GroupFilter>().unwrap().matches("5.11"));
        assert!("9.9".parse::<GroupFilter>().is_err());
    }

    #[test]
    fn cube_all_groups_pass() {
        let s = Scheme::new(build_named(Family::Hypercube, &[3]).unwrap(), Tolerances::default()).unwrap();
        let da = s.dual(0).unwrap();
        let verdicts = run(&s, &da, &GroupFilter::All, &Tolerances::default());
        for v in &verdicts {
            assert!(v.passed, "{v}");
        }
        assert!(verdicts.len() >= 20);
    }

    #[test]
    fn impossible_tolerance_fails() {
        let s = Scheme::new(build_named(Family::Cycle, &[7]).unwrap(), Tolerances::default()).unwrap();
        let da = s.dual(0).unwrap();
        let verdicts = run(&s, &da, &GroupFilter::Exact("5.1".into()), &Tolerances::with_residual(1e-30));
        assert!(verdicts.iter().any(|v| !v.passed));
    }
}
