//! The Bose-Mesner algebra: spectrum and u-table from the intersection
//! array, distance matrices, primitive idempotents and Krein parameters.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, IntersectionArray};
use crate::linalg::{self, Mat};
use crate::tol::Tolerances;
use crate::tridiag::symmetric_tridiagonal_eigenvalues;

/// Eigenvalues in strictly decreasing order, their multiplicities, and
/// `u[i][j] = u_i(θ_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub theta: Vec<f64>,
    pub m: Vec<u64>,
    pub u: Vec<Vec<f64>>,
    pub k: Vec<u64>,
}

fn residual_check(what: impl Into<String>, residual: f64, tol: f64) -> Result<()> {
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::Residual { what: what.into(), residual, tol })
    }
}

/// `u_0(λ) .. u_D(λ)` by the three-term recurrence.
pub fn u_values(ia: &IntersectionArray, lambda: f64) -> Vec<f64> {
    let d = ia.diameter;
    let mut u = vec![1.0; d + 1];
    if d == 0 {
        return u;
    }
    let k = ia.valency() as f64;
    u[1] = lambda / k;
    for i in 1..d {
        u[i + 1] = ((lambda - ia.a[i] as f64) * u[i] - ia.c_at(i) as f64 * u[i - 1])
            / ia.b_at(i) as f64;
    }
    u
}

impl Spectrum {
    pub fn compute(ia: &IntersectionArray, n: usize, tol: &Tolerances) -> Result<Self> {
        let d = ia.diameter;
        let k = ia.valency() as f64;
        let diag: Vec<f64> = ia.a.iter().map(|&a| a as f64).collect();
        let off: Vec<f64> =
            (0..d).map(|i| ((ia.b_at(i) * ia.c_at(i + 1)) as f64).sqrt()).collect();
        let mut theta = symmetric_tridiagonal_eigenvalues(&diag, &off)?;
        theta.sort_by(|a, b| b.total_cmp(a));

        let gap_tol = tol.scaled(k);
        for w in theta.windows(2) {
            if w[0] - w[1] <= gap_tol {
                return Err(Error::RepeatedEigenvalue { theta: w[0], gap: w[0] - w[1] });
            }
        }
        residual_check("largest eigenvalue equals the valency", (theta[0] - k).abs(), gap_tol)?;

        let columns: Vec<Vec<f64>> = theta.iter().map(|&t| u_values(ia, t)).collect();
        let u: Vec<Vec<f64>> = (0..=d).map(|i| columns.iter().map(|col| col[i]).collect()).collect();

        let mut m = Vec::with_capacity(d + 1);
        for (j, col) in columns.iter().enumerate() {
            let weight: f64 = col.iter().zip(&ia.k).map(|(u, &k)| u * u * k as f64).sum();
            let value = n as f64 / weight;
            let rounded = value.round();
            if rounded < 1.0 || (value - rounded).abs() >= tol.multiplicity * value.abs() {
                return Err(Error::NonIntegerMultiplicity { theta: theta[j], value });
            }
            m.push(rounded as u64);
        }

        let spec = Spectrum { n, theta, m, u, k: ia.k.clone() };
        spec.check(ia, tol)?;
        Ok(spec)
    }

    pub fn diameter(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn u(&self, i: usize, j: usize) -> f64 {
        self.u[i][j]
    }

    /// Last row of the recurrence at each eigenvalue and both orthogonality
    /// relations.
    fn check(&self, ia: &IntersectionArray, tol: &Tolerances) -> Result<()> {
        let d = self.diameter();
        let n = self.n as f64;
        if self.m.iter().sum::<u64>() != self.n as u64 {
            return Err(Error::Residual {
                what: "multiplicities sum to |X|".into(),
                residual: (self.m.iter().sum::<u64>() as f64 - n).abs(),
                tol: 0.0,
            });
        }
        for j in 0..=d {
            let th = self.theta[j];
            let lhs = th * self.u(d, j);
            let rhs = if d == 0 {
                0.0
            } else {
                ia.c_at(d) as f64 * self.u(d - 1, j) + ia.a[d] as f64 * self.u(d, j)
            };
            residual_check("terminal recurrence row", (lhs - rhs).abs(), tol.scaled(th.abs()))?;
        }
        for r in 0..=d {
            for s in 0..=d {
                let sum: f64 = (0..=d).map(|i| self.u(i, r) * self.u(i, s) * self.k[i] as f64).sum();
                let expect = if r == s { n / self.m[r] as f64 } else { 0.0 };
                residual_check("orthogonality over vertices", (sum - expect).abs(), tol.scaled(n))?;
            }
        }
        for i in 0..=d {
            for j in 0..=d {
                let sum: f64 = (0..=d).map(|r| self.u(i, r) * self.u(j, r) * self.m[r] as f64).sum();
                let expect = if i == j { n / self.k[i] as f64 } else { 0.0 };
                residual_check("orthogonality over eigenvalues", (sum - expect).abs(), tol.scaled(n))?;
            }
        }
        Ok(())
    }
}

/// `A_0 .. A_D` as exact 0/1 integer matrices.
pub fn distance_matrices(g: &Graph) -> Vec<DMatrix<i64>> {
    let n = g.n();
    (0..=g.diameter())
        .map(|i| DMatrix::from_fn(n, n, |x, y| i64::from(g.dist(x, y) == i)))
        .collect()
}

/// Largest entry of `|A_i A_j - Σ_h p^h_ij A_h|` over all `(i, j)`.
pub fn product_law_error(a: &[DMatrix<i64>], ia: &IntersectionArray) -> i64 {
    let d = ia.diameter;
    let mut worst = 0;
    for i in 0..=d {
        for j in 0..=d {
            let mut diff = &a[i] * &a[j];
            for (h, ah) in a.iter().enumerate() {
                diff -= ah * ia.p(h, i, j) as i64;
            }
            worst = worst.max(diff.iter().map(|v| v.abs()).max().unwrap_or(0));
        }
    }
    worst
}

/// `E_j = |X|^{-1} m_j Σ_i u_i(θ_j) A_i`, with idempotence, completeness and
/// trace checks.
pub fn primitive_idempotents(a: &[Mat], spec: &Spectrum, tol: &Tolerances) -> Result<Vec<Mat>> {
    let n = spec.n as f64;
    let d = spec.diameter();
    let e: Vec<Mat> = (0..=d)
        .map(|j| {
            let coeffs: Vec<f64> =
                (0..=d).map(|i| spec.m[j] as f64 / n * spec.u(i, j)).collect();
            linalg::combination(&coeffs, a)
        })
        .collect();

    let rtol = tol.scaled(1.0);
    for i in 0..=d {
        for j in i..=d {
            let mut prod = &e[i] * &e[j];
            if i == j {
                prod -= &e[i];
            }
            residual_check(format!("E_{i} E_{j} = δ E_{i}"), linalg::max_abs(&prod), rtol)?;
        }
        residual_check(
            format!("tr(E_{i}) = m_{i}"),
            (e[i].trace() - spec.m[i] as f64).abs(),
            tol.scaled(spec.m[i] as f64),
        )?;
    }
    let mut sum = Mat::identity(spec.n, spec.n);
    for ei in &e {
        sum -= ei;
    }
    residual_check("Σ E_i = I", linalg::max_abs(&sum), rtol)?;
    let e0 = e[0].map(|v| v - 1.0 / n);
    residual_check("E_0 = J/|X|", linalg::max_abs(&e0), rtol)?;
    Ok(e)
}

/// Krein parameters in a flat `(D+1)^3` tensor indexed `[h][i][j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinTensor {
    pub diameter: usize,
    values: Vec<f64>,
}

impl KreinTensor {
    pub fn q(&self, h: usize, i: usize, j: usize) -> f64 {
        let d = self.diameter + 1;
        self.values[(h * d + i) * d + j]
    }

    pub fn nonzero_count(&self, threshold: f64) -> usize {
        self.values.iter().filter(|v| v.abs() > threshold).count()
    }
}

/// `q^h_ij = (|X| / m_h) <E_i ∘ E_j, E_h>`, checked by reconstructing each
/// entrywise product from the idempotents.
pub fn krein_parameters(e: &[Mat], spec: &Spectrum, tol: &Tolerances) -> Result<KreinTensor> {
    let n = spec.n as f64;
    let d = spec.diameter();
    let size = d + 1;
    let mut values = vec![0.0; size * size * size];
    for i in 0..=d {
        for j in 0..=d {
            let had = e[i].component_mul(&e[j]);
            let mut recon = Mat::zeros(spec.n, spec.n);
            for h in 0..=d {
                let q = n / spec.m[h] as f64 * linalg::inner(&had, &e[h]);
                if q < -tol.scaled(1.0) {
                    return Err(Error::Residual {
                        what: format!("q^{h}_{i}{j} is negative"),
                        residual: -q,
                        tol: tol.scaled(1.0),
                    });
                }
                values[(h * size + i) * size + j] = q;
                linalg::axpy(&mut recon, q / n, &e[h]);
            }
            recon -= &had;
            residual_check(
                format!("E_{i} ∘ E_{j} reconstruction"),
                linalg::max_abs(&recon),
                tol.scaled(1.0),
            )?;
        }
    }
    // clamp round-off so that structural zeros read as zero
    for v in &mut values {
        if v.abs() <= tol.scaled(1.0) {
            *v = 0.0;
        }
    }
    Ok(KreinTensor { diameter: d, values })
}

#[derive(Debug, Clone)]
pub struct BoseMesner {
    pub n: usize,
    /// Exact distance matrices.
    pub a_int: Vec<DMatrix<i64>>,
    /// Distance matrices as floats.
    pub a: Vec<Mat>,
    pub e: Vec<Mat>,
    pub q: KreinTensor,
}

impl BoseMesner {
    pub fn build(g: &Graph, spec: &Spectrum, tol: &Tolerances) -> Result<Self> {
        let a_int = distance_matrices(g);
        let a: Vec<Mat> = a_int.iter().map(|m| m.map(|v| v as f64)).collect();
        let e = primitive_idempotents(&a, spec, tol)?;
        let q = krein_parameters(&e, spec, tol)?;
        Ok(BoseMesner { n: g.n(), a_int, a, e, q })
    }

    pub fn diameter(&self) -> usize {
        self.a.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_named, Family};
    use crate::graph::intersection_array;

    fn setup(family: Family, params: &[usize]) -> (Graph, IntersectionArray, Spectrum) {
        let g = build_named(family, params).unwrap();
        let ia = intersection_array(&g).unwrap();
        let spec = Spectrum::compute(&ia, g.n(), &Tolerances::default()).unwrap();
        (g, ia, spec)
    }

    #[test]
    fn cube_distance_products() {
        let (g, ia, _) = setup(Family::Hypercube, &[3]);
        let a = distance_matrices(&g);
        assert_eq!(a[0], DMatrix::identity(8, 8));
        let j = a.iter().fold(DMatrix::zeros(8, 8), |acc, m| acc + m);
        assert_eq!(j, DMatrix::from_element(8, 8, 1));
        let sq = &a[1] * &a[1];
        assert_eq!(sq, &a[0] * 3 + &a[2] * 2);
        assert_eq!((0..4).map(|h| ia.p(h, 1, 1)).collect::<Vec<_>>(), vec![3, 0, 2, 0]);
        assert_eq!(product_law_error(&a, &ia), 0);
    }

    #[test]
    fn u_table_first_column_is_one() {
        for (f, p) in [(Family::Hypercube, vec![3]), (Family::Cycle, vec![7]), (Family::Johnson, vec![6, 3])] {
            let (_, _, spec) = setup(f, &p);
            for i in 0..=spec.diameter() {
                assert!((spec.u(i, 0) - 1.0).abs() < 1e-12);
            }
            for j in 0..=spec.diameter() {
                assert_eq!(spec.u(0, j), 1.0);
            }
        }
    }

    #[test]
    fn bad_array_gives_non_integer_multiplicity() {
        // a_1 = 1 breaks a_i + b_i + c_i = k, so no graph has this array
        let (_, mut ia, _) = setup(Family::Hypercube, &[3]);
        ia.a[1] = 1;
        assert!(Spectrum::compute(&ia, 8, &Tolerances::default()).is_err());
    }

    #[test]
    fn cube_idempotents() {
        let (g, _, spec) = setup(Family::Hypercube, &[3]);
        let bm = BoseMesner::build(&g, &spec, &Tolerances::default()).unwrap();
        assert!((bm.e[1].trace() - 3.0).abs() < 1e-10);
        let e0 = Mat::from_element(8, 8, 1.0 / 8.0);
        assert!(linalg::max_abs(&(&bm.e[0] - e0)) < 1e-12);
    }

    #[test]
    fn krein_first_index_is_kronecker() {
        let (g, _, spec) = setup(Family::Hamming, &[3, 3]);
        let bm = BoseMesner::build(&g, &spec, &Tolerances::default()).unwrap();
        for h in 0..4 {
            for j in 0..4 {
                let expect = if h == j { 1.0 } else { 0.0 };
                assert!((bm.q.q(h, 0, j) - expect).abs() < 1e-9);
            }
        }
    }
}
