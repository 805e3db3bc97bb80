//! Small dense helpers over `nalgebra` matrices.

use nalgebra::{DMatrix, DVector};

pub type Mat = DMatrix<f64>;

/// Trace inner product `<R, S> = tr(R^T S)` for real matrices, summed in
/// column-major storage order.
pub fn inner(r: &Mat, s: &Mat) -> f64 {
    debug_assert_eq!(r.shape(), s.shape());
    r.as_slice().iter().zip(s.as_slice()).map(|(a, b)| a * b).sum()
}

pub fn norm(r: &Mat) -> f64 {
    inner(r, r).sqrt()
}

/// Largest absolute entry.
pub fn max_abs(r: &Mat) -> f64 {
    r.as_slice().iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// `diag(d) * m`: scales row `y` by `d[y]`.
pub fn diag_left(d: &DVector<f64>, m: &Mat) -> Mat {
    let mut out = m.clone();
    for (y, mut row) in out.row_iter_mut().enumerate() {
        row *= d[y];
    }
    out
}

/// `m * diag(d)`: scales column `z` by `d[z]`.
pub fn diag_right(m: &Mat, d: &DVector<f64>) -> Mat {
    let mut out = m.clone();
    for (z, mut col) in out.column_iter_mut().enumerate() {
        col *= d[z];
    }
    out
}

pub fn from_diag(d: &DVector<f64>) -> Mat {
    Mat::from_diagonal(d)
}

/// `y += a * x` in place.
pub fn axpy(y: &mut Mat, a: f64, x: &Mat) {
    for (yv, xv) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yv += a * xv;
    }
}

/// `Σ coeffs[i] * mats[i]`.
pub fn combination(coeffs: &[f64], mats: &[Mat]) -> Mat {
    let (r, c) = mats[0].shape();
    let mut out = Mat::zeros(r, c);
    for (coef, m) in coeffs.iter().zip(mats) {
        axpy(&mut out, *coef, m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_products_match_dense() {
        let m = Mat::from_fn(3, 3, |r, c| (r * 3 + c) as f64);
        let d = DVector::from_vec(vec![2.0, -1.0, 0.5]);
        assert_eq!(diag_left(&d, &m), from_diag(&d) * &m);
        assert_eq!(diag_right(&m, &d), &m * from_diag(&d));
    }

    #[test]
    fn inner_is_trace_form() {
        let r = Mat::from_fn(3, 3, |a, b| (a + 2 * b) as f64 - 1.0);
        let s = Mat::from_fn(3, 3, |a, b| (a * b) as f64 + 0.5);
        let trace = (r.transpose() * &s).trace();
        assert!((inner(&r, &s) - trace).abs() < 1e-12);
    }
}
