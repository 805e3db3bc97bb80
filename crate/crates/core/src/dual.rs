//! The dual Bose-Mesner algebra with respect to a base vertex, and the
//! triple-product inner-product identities that tie it to `M`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::scheme::Scheme;
use crate::tol::Tolerances;

/// Dual idempotents `E*_i` and dual distance matrices `A*_i`, stored as
/// their diagonals.
#[derive(Debug, Clone)]
pub struct DualAlgebra {
    pub x: usize,
    pub estar: Vec<DVector<f64>>,
    pub astar: Vec<DVector<f64>>,
}

fn check(what: impl Into<String>, residual: f64, tol: f64) -> Result<()> {
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::Residual { what: what.into(), residual, tol })
    }
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

impl DualAlgebra {
    pub fn build(scheme: &Scheme, x: usize, tol: &Tolerances) -> Result<Self> {
        let n = scheme.n();
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
        let g = &scheme.graph;
        let d = scheme.diameter();
        let estar: Vec<DVector<f64>> = (0..=d)
            .map(|i| DVector::from_fn(n, |y, _| if g.dist(x, y) == i { 1.0 } else { 0.0 }))
            .collect();
        let astar: Vec<DVector<f64>> = scheme
            .bm
            .e
            .iter()
            .map(|e| DVector::from_fn(n, |y, _| n as f64 * e[(x, y)]))
            .collect();
        let da = DualAlgebra { x, estar, astar };
        da.check(scheme, tol)?;
        Ok(da)
    }

    pub fn estar_matrix(&self, i: usize) -> Mat {
        linalg::from_diag(&self.estar[i])
    }

    pub fn astar_matrix(&self, i: usize) -> Mat {
        linalg::from_diag(&self.astar[i])
    }

    fn check(&self, scheme: &Scheme, tol: &Tolerances) -> Result<()> {
        let d = scheme.diameter();
        let n = scheme.n();
        let nf = n as f64;
        let spec = &scheme.spec;

        for i in 0..=d {
            let count = self.estar[i].sum();
            if count != scheme.ia.k[i] as f64 {
                return Err(Error::Residual {
                    what: format!("tr(E*_{i}) = k_{i}"),
                    residual: (count - scheme.ia.k[i] as f64).abs(),
                    tol: 0.0,
                });
            }
            let expect = if i == 0 { nf } else { 0.0 };
            check(format!("tr(A*_{i})"), (self.astar[i].sum() - expect).abs(), tol.scaled(nf))?;
        }

        let ones = DVector::from_element(n, 1.0);
        check("A*_0 = I", max_abs(&(&self.astar[0] - &ones)), tol.scaled(1.0))?;
        let total = self.astar.iter().fold(DVector::zeros(n), |acc, v| acc + v);
        check("Σ A*_i = |X| E*_0", max_abs(&(total - &self.estar[0] * nf)), tol.scaled(nf))?;

        for j in 0..=d {
            let mut recon = DVector::zeros(n);
            for i in 0..=d {
                recon.axpy(spec.m[j] as f64 * spec.u(i, j), &self.estar[i], 1.0);
            }
            let scale = max_abs(&self.astar[j]);
            check(
                format!("A*_{j} from dual idempotents"),
                max_abs(&(recon - &self.astar[j])),
                tol.scaled(scale),
            )?;

            let mut recon = DVector::zeros(n);
            for i in 0..=d {
                recon.axpy(spec.k[j] as f64 / nf * spec.u(j, i), &self.astar[i], 1.0);
            }
            check(
                format!("E*_{j} from dual distance matrices"),
                max_abs(&(recon - &self.estar[j])),
                tol.scaled(1.0),
            )?;
        }

        for i in 0..=d {
            for j in i..=d {
                let prod = self.astar[i].component_mul(&self.astar[j]);
                let mut recon = DVector::zeros(n);
                for h in 0..=d {
                    recon.axpy(scheme.bm.q.q(h, i, j), &self.astar[h], 1.0);
                }
                check(
                    format!("A*_{i} A*_{j} = Σ q^h A*_h"),
                    max_abs(&(recon - &prod)),
                    tol.scaled(max_abs(&prod)),
                )?;
            }
        }
        Ok(())
    }
}

/// The three shapes of triple product whose inner products have closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    /// `E*_i A_j E*_h`
    EstarAEstar,
    /// `E_i A*_j E_h`
    EAstarE,
    /// `A_i E*_j A_h`
    AEstarA,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::EstarAEstar, Flavor::EAstarE, Flavor::AEstarA];
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::EstarAEstar => "E*AE*",
            Flavor::EAstarE => "EA*E",
            Flavor::AEstarA => "AE*A",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "E*AE*" => Ok(Flavor::EstarAEstar),
            "EA*E" => Ok(Flavor::EAstarE),
            "AE*A" => Ok(Flavor::AEstarA),
            other => Err(format!("unknown flavor `{other}`")),
        }
    }
}

/// The matrix of the given flavor for indices `(i, j, h)`.
pub fn triple_matrix(scheme: &Scheme, da: &DualAlgebra, flavor: Flavor, (i, j, h): (usize, usize, usize)) -> Mat {
    let bm = &scheme.bm;
    match flavor {
        Flavor::EstarAEstar => {
            linalg::diag_right(&linalg::diag_left(&da.estar[i], &bm.a[j]), &da.estar[h])
        }
        Flavor::EAstarE => linalg::diag_right(&bm.e[i], &da.astar[j]) * &bm.e[h],
        Flavor::AEstarA => linalg::diag_right(&bm.a[i], &da.estar[j]) * &bm.a[h],
    }
}

/// Closed form of `<lhs, rhs>` for two triples of the same flavor.
pub fn triple_inner_closed(
    scheme: &Scheme,
    flavor: Flavor,
    (i, j, h): (usize, usize, usize),
    (r, s, t): (usize, usize, usize),
) -> f64 {
    let ia = &scheme.ia;
    let same = i == r && j == s && h == t;
    match flavor {
        Flavor::EstarAEstar if same => (ia.k[h] * ia.p(h, i, j)) as f64,
        Flavor::EAstarE if same => scheme.spec.m[h] as f64 * scheme.bm.q.q(h, i, j),
        Flavor::EstarAEstar | Flavor::EAstarE => 0.0,
        Flavor::AEstarA => (0..=ia.diameter)
            .map(|l| (ia.k[l] * ia.p(l, i, r) * ia.p(l, j, s) * ia.p(l, h, t)) as f64)
            .sum(),
    }
}

/// Both routes to a triple-product inner product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleInner {
    pub closed: f64,
    pub direct: f64,
}

impl TripleInner {
    pub fn residual(&self) -> f64 {
        (self.closed - self.direct).abs()
    }
}

pub fn triple_inner_both(
    scheme: &Scheme,
    da: &DualAlgebra,
    flavor: Flavor,
    lhs: (usize, usize, usize),
    rhs: (usize, usize, usize),
) -> TripleInner {
    let l = triple_matrix(scheme, da, flavor, lhs);
    let r = if lhs == rhs { l.clone() } else { triple_matrix(scheme, da, flavor, rhs) };
    TripleInner { closed: triple_inner_closed(scheme, flavor, lhs, rhs), direct: linalg::inner(&l, &r) }
}

/// `<lhs, rhs>` by direct trace, asserted equal to the closed form; returns
/// the closed form.
pub fn triple_product_inner(
    scheme: &Scheme,
    da: &DualAlgebra,
    flavor: Flavor,
    lhs: (usize, usize, usize),
    rhs: (usize, usize, usize),
    tol: &Tolerances,
) -> Result<f64> {
    let both = triple_inner_both(scheme, da, flavor, lhs, rhs);
    check(
        format!("<{flavor}{lhs:?}, {flavor}{rhs:?}>"),
        both.residual(),
        tol.scaled(both.closed.abs()),
    )?;
    Ok(both.closed)
}

/// Whether `E*_i A_h E*_j` (or `E_i A*_h E_j`) vanishes, asserted equivalent
/// to `p^h_ij = 0` (or `q^h_ij = 0`).
pub fn zero_triple_test(
    scheme: &Scheme,
    da: &DualAlgebra,
    flavor: Flavor,
    (h, i, j): (usize, usize, usize),
    tol: &Tolerances,
) -> Result<bool> {
    let m = match flavor {
        Flavor::EstarAEstar | Flavor::EAstarE => triple_matrix(scheme, da, flavor, (i, h, j)),
        Flavor::AEstarA => panic!("no vanishing criterion for AE*A"),
    };
    let is_zero = linalg::max_abs(&m) <= tol.scaled(1.0);
    let param_zero = match flavor {
        Flavor::EstarAEstar => scheme.ia.p(h, i, j) == 0,
        _ => scheme.bm.q.q(h, i, j).abs() <= tol.scaled(1.0),
    };
    if is_zero != param_zero {
        return Err(Error::Residual {
            what: format!("{flavor} ({h},{i},{j}) vanishing disagrees with its parameter"),
            residual: linalg::max_abs(&m),
            tol: tol.scaled(1.0),
        });
    }
    Ok(is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_named, Family};

    fn cube() -> Scheme {
        Scheme::new(build_named(Family::Hypercube, &[3]).unwrap(), Tolerances::default()).unwrap()
    }

    #[test]
    fn base_vertex_range() {
        let s = cube();
        assert!(matches!(s.dual(8), Err(Error::VertexOutOfRange { vertex: 8, n: 8 })));
    }

    #[test]
    fn cube_dual_idempotent_traces() {
        let s = cube();
        let da = s.dual(0).unwrap();
        assert_eq!(da.estar[2].sum(), 3.0);
        assert!(da.astar[0].iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn triple_examples() {
        let s = cube();
        let da = s.dual(0).unwrap();
        let tol = Tolerances::default();
        let v = triple_product_inner(&s, &da, Flavor::EstarAEstar, (1, 1, 1), (1, 1, 1), &tol).unwrap();
        assert_eq!(v, 0.0);
        let v = triple_product_inner(&s, &da, Flavor::EstarAEstar, (1, 2, 1), (2, 1, 1), &tol).unwrap();
        assert_eq!(v, 0.0);
        let v = triple_product_inner(&s, &da, Flavor::AEstarA, (0, 0, 0), (0, 0, 0), &tol).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn zero_triples() {
        let s = cube();
        let da = s.dual(0).unwrap();
        let tol = Tolerances::default();
        assert!(zero_triple_test(&s, &da, Flavor::EstarAEstar, (1, 1, 1), &tol).unwrap());
        assert!(!zero_triple_test(&s, &da, Flavor::EstarAEstar, (0, 1, 1), &tol).unwrap());
        assert!(zero_triple_test(&s, &da, Flavor::EstarAEstar, (1, 0, 2), &tol).unwrap());
    }

    #[test]
    fn flavor_round_trip() {
        for f in Flavor::ALL {
            assert_eq!(f.to_string().parse::<Flavor>().unwrap(), f);
        }
    }
}
