//! True Hodge metrics along a polarized nilpotent orbit `F(z) = e^{Σ z_j N_j} F_0`.
//!
//! The Hermitian form is `h = Σ_p (−1)^p S^h|_{V^{p,k−p}}` with
//! `S^h(u, v) = i^{−k} S(u, conj v)`, and `|v|² = v* H v` in the flat basis.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactlin::{ExactMatrix, Subspace};
use crate::numeric::{self, CMatrix};

/// Cosine threshold for treating two numeric directions as equal.
const ANGLE_TOL: f64 = 1e-10;

/// A polarized nilpotent orbit: weight `k`, polarization `S` over `Q`, a
/// reference flag `F_0` and commuting nilpotents `N_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentOrbitVHS {
    rank: usize,
    weight: i32,
    s: ExactMatrix,
    /// `(p, F^p)` by decreasing `p`.
    flag: Vec<(i32, Subspace)>,
    nilpotents: Vec<ExactMatrix>,
}

impl NilpotentOrbitVHS {
    /// Validates the data exactly: `S` rational, nondegenerate and
    /// `(−1)^k`-symmetric; the flag decreasing with `S(F^p, F^{k−p+1}) = 0`;
    /// each `N_j` nilpotent, infinitesimally isometric and horizontal.
    ///
    /// Unlisted flag steps follow the listed ones: `F^p = V` below the least
    /// listed `p`, `0` above the largest, otherwise the next listed step up.
    pub fn new(weight: i32, s: ExactMatrix, flag: Vec<(i32, ExactMatrix)>, nilpotents: Vec<ExactMatrix>) -> Result<Self> {
        let r = s.rows();
        if !s.is_square() || r == 0 {
            return Err(Error::InvalidVhs("polarization must be square".into()));
        }
        if !s.is_rational() {
            return Err(Error::InvalidVhs("polarization must be rational".into()));
        }
        if !s.is_invertible() {
            return Err(Error::InvalidVhs("polarization is degenerate".into()));
        }
        let sign_s = if weight.rem_euclid(2) == 0 { s.clone() } else { s.neg() };
        if s.transpose() != sign_s {
            return Err(Error::InvalidVhs(format!(
                "polarization is not {}symmetric",
                if weight % 2 == 0 { "" } else { "anti" }
            )));
        }
        let mut steps: Vec<(i32, Subspace)> = flag
            .into_iter()
            .map(|(p, b)| {
                if b.rows() != r {
                    Err(Error::InvalidVhs(format!("flag step F^{p} has the wrong ambient dimension")))
                } else {
                    Ok((p, Subspace::column_span(&b)))
                }
            })
            .collect::<Result<_>>()?;
        steps.sort_by(|a, b| b.0.cmp(&a.0));
        for w in steps.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidVhs(format!("flag step F^{} listed twice", w[0].0)));
            }
            if !w[1].1.contains(&w[0].1) {
                return Err(Error::InvalidVhs(format!("flag is not decreasing at F^{}", w[0].0)));
            }
        }
        let vhs = NilpotentOrbitVHS {
            rank: r,
            weight,
            s,
            flag: steps,
            nilpotents,
        };
        vhs.check_orbit_data()?;
        Ok(vhs)
    }

    fn check_orbit_data(&self) -> Result<()> {
        let (lo, hi) = self.flag_range();
        for p in lo.min(self.weight + 1 - hi)..=hi {
            let a = self.flag_step(p);
            let b = self.flag_step(self.weight - p + 1);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            if !a.basis().transpose().mul(&self.s).mul(b.basis()).is_zero() {
                return Err(Error::InvalidVhs(format!(
                    "S(F^{p}, F^{}) ≠ 0",
                    self.weight - p + 1
                )));
            }
        }
        for (j, n) in self.nilpotents.iter().enumerate() {
            if n.rows() != self.rank || !n.is_square() {
                return Err(Error::InvalidVhs(format!("N_{} has the wrong size", j + 1)));
            }
            if !n.is_nilpotent() {
                return Err(Error::InvalidVhs(format!("N_{} is not nilpotent", j + 1)));
            }
            if !n.transpose().mul(&self.s).add(&self.s.mul(n)).is_zero() {
                return Err(Error::InvalidVhs(format!("N_{} does not preserve S", j + 1)));
            }
            for p in lo..=hi {
                if !self.flag_step(p - 1).contains(&self.flag_step(p).image(n)) {
                    return Err(Error::InvalidVhs(format!("N_{} F^{p} ⊄ F^{}", j + 1, p - 1)));
                }
            }
            for (i, m) in self.nilpotents[..j].iter().enumerate() {
                if !m.commutes_with(n) {
                    return Err(Error::NonCommuting(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn polarization(&self) -> &ExactMatrix {
        &self.s
    }

    pub fn nilpotents(&self) -> &[ExactMatrix] {
        &self.nilpotents
    }

    pub fn variables(&self) -> usize {
        self.nilpotents.len()
    }

    /// Least and largest listed flag index.
    pub fn flag_range(&self) -> (i32, i32) {
        match (self.flag.last(), self.flag.first()) {
            (Some(lo), Some(hi)) => (lo.0, hi.0),
            _ => (0, 0),
        }
    }

    /// `F^p_0`.
    pub fn flag_step(&self, p: i32) -> Subspace {
        let (lo, hi) = self.flag_range();
        if self.flag.is_empty() || p < lo {
            return Subspace::full(self.rank);
        }
        if p > hi {
            return Subspace::zero(self.rank);
        }
        self.flag
            .iter()
            .rev()
            .find(|(q, _)| *q >= p)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.rank))
    }

    /// Largest `q` with `F^q ≠ 0`.
    pub fn lowest_piece_index(&self) -> i32 {
        let (lo, hi) = self.flag_range();
        (lo..=hi).rev().find(|&p| !self.flag_step(p).is_zero()).unwrap_or(lo - 1)
    }

    fn orbit_operator(&self, z: &[Complex64]) -> Result<CMatrix> {
        if z.len() != self.nilpotents.len() {
            return Err(Error::Dimension("point has the wrong number of coordinates".into()));
        }
        if z.iter().any(|c| c.im <= 0.0) {
            return Err(Error::OutsideUpperHalfSpace);
        }
        let mut x = CMatrix::zeros(self.rank, self.rank);
        for (n, &zj) in self.nilpotents.iter().zip(z) {
            x += n.to_complex() * zj;
        }
        Ok(numeric::exp_nilpotent(&x))
    }

    /// Holomorphic frame `e^{Σ z_j N_j} B_q` of the lowest piece `F^q(z)`.
    pub fn lowest_piece_frame(&self, z: &[Complex64]) -> Result<CMatrix> {
        let q = self.lowest_piece_index();
        Ok(self.orbit_operator(z)? * self.flag_step(q).basis().to_complex())
    }

    /// Hodge decomposition of the orbit at `z`, or a diagnostic when the pieces
    /// do not span `V`.
    pub fn decompose(&self, z: &[Complex64]) -> Result<core::result::Result<HodgeDecomposition, String>> {
        let e = self.orbit_operator(z)?;
        let (lo, hi) = self.flag_range();
        let k = self.weight;
        let p_min = lo.min(k - hi) - 1;
        let p_max = hi.max(k - lo) + 1;
        let mut pieces = Vec::new();
        let mut total = 0;
        for p in p_min..=p_max {
            let fp = &e * self.flag_step(p).basis().to_complex();
            let fq = (&e * self.flag_step(k - p).basis().to_complex()).map(|c| c.conj());
            let piece = numeric::intersect_spans(&fp, &fq, ANGLE_TOL);
            if piece.ncols() > 0 {
                total += piece.ncols();
                pieces.push((p, piece));
            }
        }
        if total != self.rank {
            return Ok(Err(format!("bigraded pieces have total dimension {total}, expected {}", self.rank)));
        }
        let cols: Vec<&CMatrix> = pieces.iter().map(|(_, b)| b).collect();
        let basis = hstack(self.rank, &cols);
        let Some(inv) = basis.clone().try_inverse() else {
            return Ok(Err("bigraded pieces are not independent".into()));
        };
        let mut projectors = Vec::with_capacity(pieces.len());
        let mut start = 0;
        for (_, b) in &pieces {
            let d = b.ncols();
            let sel = basis.columns(start, d) * inv.rows(start, d);
            projectors.push(sel);
            start += d;
        }
        Ok(Ok(HodgeDecomposition {
            weight: k,
            pieces,
            projectors,
        }))
    }

    /// `i^{−k} S^T` as a complex matrix, so that `S^h(u, v) = v̄ᵀ (i^{−k} Sᵀ) u`.
    fn twisted_form(&self) -> CMatrix {
        let phase = Complex64::new(0.0, 1.0).powi(-self.weight);
        self.s.transpose().to_complex() * phase
    }
}

/// Numeric `V = ⊕_p V^{p,k−p}` at one point.
#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    pub weight: i32,
    /// `(p, orthonormal basis of V^{p,k−p})`.
    pub pieces: Vec<(i32, CMatrix)>,
    /// Projectors along the decomposition, same order.
    pub projectors: Vec<CMatrix>,
}

fn hstack(rows: usize, blocks: &[&CMatrix]) -> CMatrix {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        out.columns_mut(c, b.ncols()).copy_from(*b);
        c += b.ncols();
    }
    out
}

fn sign(p: i32) -> f64 {
    if p.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The Hodge metric at one point.
#[derive(Clone, Debug)]
pub struct HodgeMetricSample {
    pub z: Vec<Complex64>,
    /// `H(z)` with `|v|² = v* H v`, present when the decomposition succeeded.
    pub h: Option<CMatrix>,
    pub hodge_numbers: Vec<(i32, usize)>,
    pub hermitian_defect: f64,
    pub min_eigenvalue: f64,
    pub diagnostic: Option<String>,
}

impl HodgeMetricSample {
    pub fn is_valid(&self) -> bool {
        self.h.is_some()
    }

    pub fn norm_squared(&self, v: &DVector<Complex64>) -> Option<f64> {
        self.h.as_ref().map(|h| (v.adjoint() * h * v)[(0, 0)].re)
    }
}

pub fn orbit_hodge_metric(vhs: &NilpotentOrbitVHS, z: &[Complex64]) -> Result<HodgeMetricSample> {
    let invalid = |msg: String| HodgeMetricSample {
        z: z.to_vec(),
        h: None,
        hodge_numbers: Vec::new(),
        hermitian_defect: f64::NAN,
        min_eigenvalue: f64::NAN,
        diagnostic: Some(msg),
    };
    let dec = match vhs.decompose(z)? {
        Ok(d) => d,
        Err(msg) => return Ok(invalid(msg)),
    };
    let form = vhs.twisted_form();
    let r = vhs.rank();
    let mut h = CMatrix::zeros(r, r);
    for ((p, _), proj) in dec.pieces.iter().zip(&dec.projectors) {
        h += (proj.adjoint() * &form * proj).scale(sign(*p));
    }
    let min_eigenvalue = numeric::min_hermitian_eigenvalue(&h);
    let hermitian_defect = numeric::hermitian_defect(&h);
    if !(min_eigenvalue > 0.0) {
        let mut s = invalid(format!("Hodge form is not positive (min eigenvalue {min_eigenvalue:e})"));
        s.hodge_numbers = dec.pieces.iter().map(|(p, b)| (*p, b.ncols())).collect();
        s.min_eigenvalue = min_eigenvalue;
        s.hermitian_defect = hermitian_defect;
        return Ok(s);
    }
    Ok(HodgeMetricSample {
        z: z.to_vec(),
        hodge_numbers: dec.pieces.iter().map(|(p, b)| (*p, b.ncols())).collect(),
        h: Some(h),
        hermitian_defect,
        min_eigenvalue,
        diagnostic: None,
    })
}

/// Per-piece positivity of `(−1)^p S^h` and orthogonality of distinct pieces.
#[derive(Clone, Debug)]
pub struct PolarizationReport {
    pub valid: bool,
    /// `(p, least eigenvalue of (−1)^p S^h on V^{p,k−p})` on orthonormal bases.
    pub positivity: Vec<(i32, f64)>,
    /// Largest `|S^h(u, v)|` between unit vectors of distinct pieces, relative to `‖S‖`.
    pub cross_term: f64,
    pub pass: bool,
}

pub fn polarization_check(vhs: &NilpotentOrbitVHS, z: &[Complex64], tol: f64) -> Result<PolarizationReport> {
    let dec = match vhs.decompose(z)? {
        Ok(d) => d,
        Err(_) => {
            return Ok(PolarizationReport {
                valid: false,
                positivity: Vec::new(),
                cross_term: f64::NAN,
                pass: false,
            })
        }
    };
    let form = vhs.twisted_form();
    let scale = form.norm().max(f64::MIN_POSITIVE);
    let mut positivity = Vec::new();
    let mut cross: f64 = 0.0;
    for (a, (p, ba)) in dec.pieces.iter().enumerate() {
        let gram = (ba.adjoint() * &form * ba).scale(sign(*p));
        positivity.push((*p, numeric::min_hermitian_eigenvalue(&gram) / scale));
        for (b, (_, bb)) in dec.pieces.iter().enumerate() {
            if a != b {
                let m = bb.adjoint() * &form * ba;
                cross = cross.max(m.iter().fold(0.0f64, |acc, c| acc.max(c.norm())) / scale);
            }
        }
    }
    let pass = positivity.iter().all(|(_, e)| *e > tol) && cross < tol;
    Ok(PolarizationReport {
        valid: true,
        positivity,
        cross_term: cross,
        pass,
    })
}

/// `|v|²_{h(z)}` or `None` where the decomposition fails.
pub fn hodge_norm_squared(vhs: &NilpotentOrbitVHS, v: &DVector<Complex64>, z: &[Complex64]) -> Result<Option<f64>> {
    Ok(orbit_hodge_metric(vhs, z)?.norm_squared(v))
}

/// Finite-difference values of `−∂∂̄ log φ`.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    /// Grid point and least eigenvalue of `−(∂_a ∂̄_b log φ)`, `None` when skipped.
    pub values: Vec<(Vec<Complex64>, Option<f64>)>,
    pub min: f64,
    pub skipped: usize,
    pub pass: bool,
}

/// Probes the curvature sign of the lowest piece with the metric restricted
/// to the columns of `frame(z)`: `φ = |σ|²` for one column, `det` of the Gram
/// matrix otherwise. Second derivatives are central differences with `step`.
pub fn curvature_probe(
    vhs: &NilpotentOrbitVHS,
    frame: &dyn Fn(&[Complex64]) -> Result<CMatrix>,
    grid: &[Vec<Complex64>],
    step: f64,
    tol: f64,
) -> Result<CurvatureReport> {
    let log_phi = |z: &[Complex64]| -> Result<Option<f64>> {
        let sample = orbit_hodge_metric(vhs, z)?;
        let Some(h) = sample.h else { return Ok(None) };
        let f = frame(z)?;
        let gram = f.adjoint() * h * &f;
        let det = if gram.nrows() == 1 {
            gram[(0, 0)].re
        } else {
            gram.determinant().re
        };
        Ok(if det > 0.0 { Some(libm::log(det)) } else { None })
    };
    let mut values = Vec::with_capacity(grid.len());
    let mut min = f64::INFINITY;
    let mut skipped = 0;
    for z in grid {
        match levi_min_eigenvalue(&log_phi, z, step)? {
            Some(v) => {
                min = min.min(v);
                values.push((z.clone(), Some(v)));
            }
            None => {
                skipped += 1;
                values.push((z.clone(), None));
            }
        }
    }
    Ok(CurvatureReport {
        pass: skipped < grid.len() && min >= -tol,
        values,
        min,
        skipped,
    })
}

/// Least eigenvalue of `−(∂_a ∂̄_b f)` by central differences, with
/// `∂_a ∂̄_b = ¼ (∂x_a∂x_b + ∂y_a∂y_b + i(∂x_a∂y_b − ∂y_a∂x_b))`.
fn levi_min_eigenvalue(
    f: &dyn Fn(&[Complex64]) -> Result<Option<f64>>,
    z: &[Complex64],
    h: f64,
) -> Result<Option<f64>> {
    let n = z.len();
    let dir = |k: usize| -> (usize, Complex64) {
        if k < n {
            (k, Complex64::new(h, 0.0))
        } else {
            (k - n, Complex64::new(0.0, h))
        }
    };
    let eval = |shifts: &[(usize, Complex64, f64)]| -> Result<Option<f64>> {
        let mut p = z.to_vec();
        for &(i, d, c) in shifts {
            p[i] += d * c;
        }
        f(&p)
    };
    let Some(f0) = eval(&[])? else { return Ok(None) };
    let mut hess = alloc::vec![alloc::vec![0.0f64; 2 * n]; 2 * n];
    for a in 0..2 * n {
        let (ia, da) = dir(a);
        for b in a..2 * n {
            let (ib, db) = dir(b);
            let v = if a == b {
                let (Some(p), Some(m)) = (eval(&[(ia, da, 1.0)])?, eval(&[(ia, da, -1.0)])?) else {
                    return Ok(None);
                };
                (p - 2.0 * f0 + m) / (h * h)
            } else {
                let mut acc = 0.0;
                for (sa, sb, sgn) in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
                    let Some(v) = eval(&[(ia, da, sa), (ib, db, sb)])? else {
                        return Ok(None);
                    };
                    acc += sgn * v;
                }
                acc / (4.0 * h * h)
            };
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }
    let levi = CMatrix::from_fn(n, n, |a, b| {
        let re = hess[a][b] + hess[n + a][n + b];
        let im = hess[a][n + b] - hess[n + a][b];
        -Complex64::new(re, im) * 0.25
    });
    Ok(Some(numeric::min_hermitian_eigenvalue(&levi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elliptic() -> NilpotentOrbitVHS {
        NilpotentOrbitVHS::new(
            1,
            ExactMatrix::from_ints(&[&[0, -1], &[1, 0]]),
            alloc::vec![(1, ExactMatrix::from_ints(&[&[0], &[1]]))],
            alloc::vec![ExactMatrix::from_ints(&[&[0, 1], &[0, 0]])],
        )
        .unwrap()
    }

    fn vec2(a: Complex64, b: Complex64) -> DVector<Complex64> {
        DVector::from_vec(alloc::vec![a, b])
    }

    #[test]
    fn elliptic_closed_forms() {
        let vhs = elliptic();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        for &(x, y) in &[(0.0, 1.0), (0.3, 2.5), (-0.4, 0.7)] {
            let z = Complex64::new(x, y);
            let s = orbit_hodge_metric(&vhs, &[z]).unwrap();
            assert!(s.is_valid());
            let w = s.norm_squared(&vec2(z, one)).unwrap();
            assert!((w - 2.0 * y).abs() < 1e-12 * y);
            let e1 = s.norm_squared(&vec2(one, zero)).unwrap();
            assert!((e1 * y - 1.0).abs() < 1e-12);
            let e2 = s.norm_squared(&vec2(zero, one)).unwrap();
            assert!((e2 - z.norm_sqr() / y).abs() < 1e-12 * e2);
            assert!(s.hermitian_defect < 1e-12);
        }
    }

    #[test]
    fn polarization_examples() {
        let vhs = elliptic();
        for y in [1.0, 1e3] {
            let r = polarization_check(&vhs, &[Complex64::new(0.0, y)], 1e-9).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let trivial = NilpotentOrbitVHS::new(
            0,
            ExactMatrix::from_ints(&[&[1]]),
            alloc::vec![(0, ExactMatrix::from_ints(&[&[1]]))],
            alloc::vec![ExactMatrix::from_ints(&[&[0]])],
        )
        .unwrap();
        assert!(polarization_check(&trivial, &[Complex64::new(0.0, 1.0)], 1e-9).unwrap().pass);
    }

    #[test]
    fn validation_failures() {
        let s = ExactMatrix::from_ints(&[&[0, -1], &[1, 0]]);
        let f = alloc::vec![(1, ExactMatrix::from_ints(&[&[0], &[1]]))];
        // symmetric S with odd weight
        assert!(NilpotentOrbitVHS::new(1, ExactMatrix::identity(2, 1), f.clone(), alloc::vec![]).is_err());
        // N not in the Lie algebra of S
        let bad = ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        assert!(NilpotentOrbitVHS::new(1, s.clone(), f.clone(), alloc::vec![bad]).is_err());
        // S(F^1, F^1) ≠ 0 is impossible to violate in rank 2 weight 1; use a bad flag in weight 0
        let s0 = ExactMatrix::identity(2, 1);
        let f0 = alloc::vec![(1, ExactMatrix::from_ints(&[&[1], &[0]]))];
        assert!(NilpotentOrbitVHS::new(0, s0, f0, alloc::vec![]).is_err());
        assert!(NilpotentOrbitVHS::new(1, s, f, alloc::vec![ExactMatrix::from_ints(&[&[0, 1], &[0, 0]])]).is_ok());
    }

    #[test]
    fn curvature_of_elliptic_lowest_piece() {
        let vhs = elliptic();
        let frame = |z: &[Complex64]| vhs.lowest_piece_frame(z);
        let grid: Vec<Vec<Complex64>> = [1.0, 2.0, 4.0].iter().map(|&y| alloc::vec![Complex64::new(0.1, y)]).collect();
        let r = curvature_probe(&vhs, &frame, &grid, 1e-3, 1e-6).unwrap();
        assert!(r.pass);
        for (z, v) in &r.values {
            let y = z[0].im;
            assert!((v.unwrap() - 1.0 / (4.0 * y * y)).abs() < 1e-4);
        }
    }
}
