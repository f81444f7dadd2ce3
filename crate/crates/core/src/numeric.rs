//! Floating-point helpers shared by the metric and frame evaluators.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

pub fn is_positive_definite(m: &CMatrix) -> bool {
    m.nrows() == 0 || min_hermitian_eigenvalue(m) > 0.0
}

/// `‖m − m*‖ / ‖m‖` (Frobenius).
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.norm();
    if n == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / n
}

/// Orthonormal basis of the column span, dropping singular values below
/// `rel_tol·σ_max`.
pub fn orthonormal_span(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return CMatrix::zeros(rows, 0);
    }
    let keep: alloc::vec::Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rel_tol * smax)
        .collect();
    CMatrix::from_fn(rows, keep.len(), |r, c| u[(r, keep[c])])
}

/// Intersection of two spans through principal angles: directions whose
/// cosine with the other subspace exceeds `1 − angle_tol`.
pub fn intersect_spans(a: &CMatrix, b: &CMatrix, angle_tol: f64) -> CMatrix {
    let rows = a.nrows();
    let qa = orthonormal_span(a, 1e-12);
    let qb = orthonormal_span(b, 1e-12);
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let c = qa.adjoint() * &qb;
    let svd = c.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let keep: alloc::vec::Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1.0 - angle_tol)
        .collect();
    let dirs = CMatrix::from_fn(u.nrows(), keep.len(), |r, c| u[(r, keep[c])]);
    qa * dirs
}

/// `exp(x)` for nilpotent `x`, as the finite series.
pub fn exp_nilpotent(x: &CMatrix) -> CMatrix {
    let r = x.nrows();
    let mut term = CMatrix::identity(r, r);
    let mut acc = term.clone();
    for k in 1..=r {
        term = (&term * x).unscale(k as f64);
        acc += &term;
    }
    acc
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// `s = e^{2πi z}`.
pub fn disk_coordinate(z: Complex64) -> Complex64 {
    cis(TWO_PI * z.re).scale(libm::exp(-TWO_PI * z.im))
}
