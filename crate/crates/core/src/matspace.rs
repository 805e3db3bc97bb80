//! Subspaces of the `n × n` real matrix space under the trace inner product.
//!
//! Spaces are held as orthogonal bases. Spans are built by modified
//! Gram-Schmidt with a second orthogonalization pass; a generator whose
//! residual norm falls to `rank · max_norm` or below is treated as dependent.
//! Intersections use principal angles between orthonormal bases, and every
//! intersection is cross-checked against the dimension formula
//! `dim(U ∩ W) = dim U + dim W - dim(U + W)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::tol::Tolerances;

/// Borderline factor: rank decisions this close to the threshold are flagged.
const CONDITIONING_FACTOR: f64 = 1e3;

#[derive(Debug, Clone)]
pub struct MatrixSpace {
    n: usize,
    basis: Vec<Mat>,
    provenance: Vec<String>,
    warnings: Vec<String>,
}

impl MatrixSpace {
    pub fn zero(n: usize) -> Self {
        MatrixSpace { n, basis: Vec::new(), provenance: Vec::new(), warnings: Vec::new() }
    }

    /// Wraps a basis already known to be orthogonal. Nothing is discarded;
    /// use [`orthogonality_residual`](Self::orthogonality_residual) to check.
    pub fn from_orthogonal(n: usize, basis: Vec<Mat>, provenance: Vec<String>) -> Self {
        assert_eq!(basis.len(), provenance.len());
        MatrixSpace { n, basis, provenance, warnings: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Unit-norm copies of the basis.
    pub fn orthonormal(&self) -> Vec<Mat> {
        self.basis.iter().map(|b| b / linalg::norm(b)).collect()
    }

    /// Largest `|<b_r, b_s>| / (|b_r| |b_s|)` over distinct basis elements.
    pub fn orthogonality_residual(&self) -> f64 {
        let norms: Vec<f64> = self.basis.iter().map(linalg::norm).collect();
        let mut worst = 0.0f64;
        for r in 0..self.basis.len() {
            for s in r + 1..self.basis.len() {
                let c = linalg::inner(&self.basis[r], &self.basis[s]) / (norms[r] * norms[s]);
                worst = worst.max(c.abs());
            }
        }
        worst
    }

    /// Smallest basis norm, or infinity for the zero space.
    pub fn min_norm(&self) -> f64 {
        self.basis.iter().map(linalg::norm).fold(f64::INFINITY, f64::min)
    }

    /// Orthogonal projection onto the space.
    pub fn project(&self, m: &Mat) -> Mat {
        let mut out = Mat::zeros(self.n, self.n);
        for b in &self.basis {
            let nb = linalg::inner(b, b);
            linalg::axpy(&mut out, linalg::inner(b, m) / nb, b);
        }
        out
    }

    /// `|m - proj(m)| / |m|`, zero for the zero matrix.
    pub fn relative_residual(&self, m: &Mat) -> f64 {
        let norm = linalg::norm(m);
        if norm == 0.0 {
            return 0.0;
        }
        linalg::norm(&(m - self.project(m))) / norm
    }

    pub fn contains(&self, m: &Mat, tol: &Tolerances) -> bool {
        self.relative_residual(m) <= tol.residual
    }

    /// Largest relative residual of `other`'s basis against this space.
    pub fn containment_residual(&self, other: &MatrixSpace) -> f64 {
        other.basis.iter().map(|b| self.relative_residual(b)).fold(0.0, f64::max)
    }

    /// Largest `|<u, w>| / (|u| |w|)` between the two bases.
    pub fn cross_residual(&self, other: &MatrixSpace) -> f64 {
        let mut worst = 0.0f64;
        for u in &self.basis {
            let nu = linalg::norm(u);
            for w in &other.basis {
                worst = worst.max((linalg::inner(u, w) / (nu * linalg::norm(w))).abs());
            }
        }
        worst
    }

    fn check_side(&self, other: &MatrixSpace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SideMismatch(self.n, other.n));
        }
        Ok(())
    }
}

/// Orthogonalizes `generators` in order, keeping those with a residual above
/// `tol.rank` times the largest generator norm.
pub fn span(n: usize, generators: &[Mat], labels: &[String], tol: &Tolerances) -> MatrixSpace {
    let mut space = MatrixSpace::zero(n);
    extend(&mut space, generators, labels, tol);
    space
}

/// Appends the parts of `generators` not already in `space`, returning the
/// number of new basis elements. The rank threshold is relative to the
/// largest norm among `generators`.
pub fn extend(space: &mut MatrixSpace, generators: &[Mat], labels: &[String], tol: &Tolerances) -> usize {
    assert_eq!(generators.len(), labels.len());
    let before = space.dim();
    let max_norm = generators.iter().map(linalg::norm).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return 0;
    }
    let threshold = tol.rank * max_norm;
    for (g, label) in generators.iter().zip(labels) {
        assert_eq!(g.nrows(), space.n, "generator side mismatch");
        let mut v = g.clone();
        for _ in 0..2 {
            for q in &space.basis {
                let c = linalg::inner(q, &v);
                linalg::axpy(&mut v, -c, q);
            }
        }
        let residual = linalg::norm(&v);
        if residual > threshold / CONDITIONING_FACTOR && residual < threshold * CONDITIONING_FACTOR {
            space.warnings.push(format!(
                "borderline rank decision for {label}: residual {residual:.3e} vs threshold {threshold:.3e}"
            ));
        }
        if residual > threshold {
            space.basis.push(v / residual);
            space.provenance.push(label.clone());
        }
    }
    space.dim() - before
}

/// Span with generic labels `g0, g1, ...`.
pub fn span_unlabeled(n: usize, generators: &[Mat], tol: &Tolerances) -> MatrixSpace {
    let labels: Vec<String> = (0..generators.len()).map(|i| format!("g{i}")).collect();
    span(n, generators, &labels, tol)
}

/// `Span{RS : R ∈ r, S ∈ s}` from products of the two bases.
pub fn product_space(r: &MatrixSpace, s: &MatrixSpace, tol: &Tolerances) -> Result<MatrixSpace> {
    r.check_side(s)?;
    let mut gens = Vec::with_capacity(r.dim() * s.dim());
    let mut labels = Vec::with_capacity(r.dim() * s.dim());
    for (a, la) in r.basis.iter().zip(&r.provenance) {
        for (b, lb) in s.basis.iter().zip(&s.provenance) {
            gens.push(a * b);
            labels.push(format!("{la}·{lb}"));
        }
    }
    let mut out = span(r.n, &gens, &labels, tol);
    out.warnings.splice(0..0, r.warnings.iter().chain(&s.warnings).cloned());
    Ok(out)
}

pub fn sum_space(u: &MatrixSpace, w: &MatrixSpace, tol: &Tolerances) -> Result<MatrixSpace> {
    u.check_side(w)?;
    let gens: Vec<Mat> = u.basis.iter().chain(&w.basis).cloned().collect();
    let labels: Vec<String> = u.provenance.iter().chain(&w.provenance).cloned().collect();
    Ok(span(u.n, &gens, &labels, tol))
}

/// Intersection by principal angles: cosines of the cross-Gram decide the
/// dimension, the smallest sines of W projected off U give the basis.
pub fn intersect_space(u: &MatrixSpace, w: &MatrixSpace, tol: &Tolerances) -> Result<MatrixSpace> {
    u.check_side(w)?;
    let sum_dim = sum_space(u, w, tol)?.dim();
    let formula = u.dim() + w.dim() - sum_dim;
    if u.dim() == 0 || w.dim() == 0 {
        return if formula == 0 {
            Ok(MatrixSpace::zero(u.n))
        } else {
            Err(Error::InconsistentIntersection { angles: 0, formula })
        };
    }

    let pu = u.orthonormal();
    let pw = w.orthonormal();
    let cross = DMatrix::from_fn(pu.len(), pw.len(), |a, b| linalg::inner(&pu[a], &pw[b]));
    let angles = cross.singular_values().iter().filter(|&&c| c >= 1.0 - tol.angle).count();
    if angles != formula {
        return Err(Error::InconsistentIntersection { angles, formula });
    }
    if angles == 0 {
        return Ok(MatrixSpace::zero(u.n));
    }

    // Cosines near 1 only fix the vectors to about sqrt(eps); take them from
    // the smallest sines instead, i.e. from W projected off U.
    let n2 = u.n * u.n;
    let mut sines = DMatrix::zeros(n2, pw.len());
    for (col, q) in pw.iter().enumerate() {
        let mut r = q.clone();
        for _ in 0..2 {
            for p in &pu {
                let c = linalg::inner(p, &r);
                linalg::axpy(&mut r, -c, p);
            }
        }
        sines.column_mut(col).copy_from_slice(r.as_slice());
    }
    let svd = sines.svd(false, true);
    let right = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for &idx in order.iter().take(angles) {
        let coeffs: Vec<f64> = right.row(idx).iter().copied().collect();
        gens.push(linalg::combination(&coeffs, &pw));
        labels.push(format!("angle{}", gens.len() - 1));
    }
    Ok(MatrixSpace::from_orthogonal(u.n, gens, labels))
}

/// Orthogonal complement of `u` inside `w`; requires `u ⊆ w`.
pub fn complement_in(u: &MatrixSpace, w: &MatrixSpace, tol: &Tolerances) -> Result<MatrixSpace> {
    u.check_side(w)?;
    for (index, (b, label)) in u.basis.iter().zip(&u.provenance).enumerate() {
        let residual = w.relative_residual(b);
        if residual > tol.residual {
            return Err(Error::NotContained { index, label: label.clone(), residual });
        }
    }
    let pu = u.orthonormal();
    let projected: Vec<Mat> = w
        .basis
        .iter()
        .map(|b| {
            let mut v = b.clone();
            for _ in 0..2 {
                for q in &pu {
                    let c = linalg::inner(q, &v);
                    linalg::axpy(&mut v, -c, q);
                }
            }
            v
        })
        .collect();
    // threshold against the original W norms, not the projected ones
    let max_norm = w.basis.iter().map(linalg::norm).fold(0.0, f64::max);
    let mut scaled_tol = *tol;
    let projected_max = projected.iter().map(linalg::norm).fold(0.0, f64::max);
    if projected_max > 0.0 {
        scaled_tol.rank = tol.rank * max_norm / projected_max;
    }
    let out = span(u.n, &projected, &w.provenance, &scaled_tol);
    let expected = w.dim() - u.dim();
    if out.dim() != expected {
        return Err(Error::DimensionMismatch {
            what: "orthogonal complement".into(),
            expected,
            found: out.dim(),
        });
    }
    Ok(out)
}

/// Rank from the Gram matrix eigenvalues: `σ >= rank² σ_max`.
pub fn gram_rank(generators: &[Mat], tol: &Tolerances) -> usize {
    if generators.is_empty() {
        return 0;
    }
    let k = generators.len();
    let gram = DMatrix::from_fn(k, k, |a, b| linalg::inner(&generators[a], &generators[b]));
    let eig = gram.symmetric_eigen().eigenvalues;
    let max = eig.iter().fold(0.0f64, |m, v| m.max(*v));
    if max <= 0.0 {
        return 0;
    }
    eig.iter().filter(|&&v| v >= gram_threshold(tol, k) * max).count()
}

/// Relative cut on Gram eigenvalues: `τ²`, floored at the accuracy a
/// symmetric eigensolver can deliver for a `k × k` Gram matrix.
pub fn gram_threshold(tol: &Tolerances, k: usize) -> f64 {
    (tol.rank * tol.rank).max(8.0 * k as f64 * f64::EPSILON)
}

/// Rank from singular values of the stacked vectorizations (row-major
/// flattening): `σ >= rank σ_max`.
pub fn stacked_rank(generators: &[Mat], tol: &Tolerances) -> usize {
    if generators.is_empty() {
        return 0;
    }
    let n = generators[0].nrows();
    let stacked = DMatrix::from_fn(n * n, generators.len(), |row, col| {
        generators[col][(row / n, row % n)]
    });
    let sv = stacked.singular_values();
    let max = sv.iter().fold(0.0f64, |m, v| m.max(*v));
    if max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&v| v >= tol.rank * max).count()
}
