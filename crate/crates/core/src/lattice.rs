//! Deligne canonical-lattice frames `w_α(z) = e^{Σ z_j R_j} v_α`, residues,
//! Laurent sections in such a frame, and pullback to the unipotent cover.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactlin::{CycScalar, ExactMatrix, ExactVector};
use crate::monodromy::{validate_tuple, MonodromyTuple};
use crate::numeric::{self, CMatrix, TWO_PI};

/// Choice of flat vectors `v_α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameBasis {
    Standard,
    /// Simultaneous eigenvectors of every `(T_j)_s`, from projector images.
    EigenAdapted,
}

#[derive(Clone, Debug)]
struct NumericLog {
    /// `(−k/m, P)` per eigenblock.
    blocks: Vec<(f64, CMatrix)>,
    n: CMatrix,
}

/// A canonical-lattice frame of a validated monodromy tuple.
#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    tuple: MonodromyTuple,
    basis: ExactMatrix,
    tag: u64,
    logs: Vec<NumericLog>,
    basis_c: CMatrix,
}

impl CanonicalFrame {
    pub fn new(tuple: MonodromyTuple, basis: FrameBasis) -> Result<Self> {
        let r = tuple.rank();
        let b = match basis {
            FrameBasis::Standard => ExactMatrix::identity(r, tuple.order()),
            FrameBasis::EigenAdapted => {
                let vecs: Vec<ExactVector> = tuple
                    .logs()
                    .joint_eigenbasis()
                    .into_iter()
                    .map(|(v, _)| v)
                    .collect();
                ExactMatrix::from_columns(r, &vecs)
            }
        };
        Self::with_basis(tuple, b)
    }

    /// Frame on explicit flat vectors (the columns of `basis`).
    pub fn with_basis(tuple: MonodromyTuple, basis: ExactMatrix) -> Result<Self> {
        let r = tuple.rank();
        if basis.rows() != r || basis.cols() != r {
            return Err(Error::Dimension(format!("frame basis must be {r}×{r}")));
        }
        if !basis.is_invertible() {
            return Err(Error::InvalidInput("frame basis vectors are dependent".into()));
        }
        let basis = basis.lift(num_integer::lcm(basis.order(), tuple.order()));
        let logs = tuple
            .logs()
            .logs
            .iter()
            .map(|l| NumericLog {
                blocks: l
                    .blocks
                    .iter()
                    .map(|b| (-(b.k as f64) / l.index as f64, b.projector.to_complex()))
                    .collect(),
                n: l.n.to_complex(),
            })
            .collect();
        let mut key = String::new();
        for m in tuple.matrices() {
            let _ = write!(key, "{m};");
        }
        let _ = write!(key, "|{basis}");
        Ok(CanonicalFrame {
            tag: fnv1a(key.as_bytes()),
            basis_c: basis.to_complex(),
            tuple,
            basis,
            logs,
        })
    }

    pub fn tuple(&self) -> &MonodromyTuple {
        &self.tuple
    }

    pub fn rank(&self) -> usize {
        self.tuple.rank()
    }

    pub fn variables(&self) -> usize {
        self.tuple.variables()
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    /// Identifies the tuple and basis; sections carry it to catch frame mix-ups.
    pub fn tag(&self) -> u64 {
        self.tag
    }

    /// Branch exponents `k_{αj}` when every `v_α` is a simultaneous
    /// eigenvector of the semisimple parts.
    pub fn adapted_exponents(&self) -> Result<Vec<Vec<u32>>> {
        let cols = self.basis.columns();
        let mut out = Vec::with_capacity(cols.len());
        for (alpha, v) in cols.iter().enumerate() {
            let mut ks = Vec::with_capacity(self.variables());
            for (j, log) in self.tuple.logs().logs.iter().enumerate() {
                let k = log
                    .blocks
                    .iter()
                    .find(|b| b.projector.mul_vec(v) == *v)
                    .map(|b| b.k)
                    .ok_or_else(|| {
                        Error::FrameNotAdapted(format!(
                            "v_{} is not an eigenvector of (T_{})_s",
                            alpha + 1,
                            j + 1
                        ))
                    })?;
                ks.push(k);
            }
            out.push(ks);
        }
        Ok(out)
    }

    /// `exp(Σ_j z_j R_j)` as a complex matrix in the flat basis.
    pub fn propagator(&self, z: &[Complex64]) -> Result<CMatrix> {
        if z.len() != self.variables() {
            return Err(Error::Dimension("point has the wrong number of coordinates".into()));
        }
        let r = self.rank();
        let mut m = CMatrix::identity(r, r);
        let mut x = CMatrix::zeros(r, r);
        for (log, &zj) in self.logs.iter().zip(z) {
            let mut semisimple = CMatrix::zeros(r, r);
            for (a, p) in &log.blocks {
                // e^{2πi z a}
                let phase = (Complex64::new(0.0, TWO_PI * a) * zj).exp();
                semisimple += p * phase;
            }
            m = m * semisimple;
            x += &log.n * zj;
        }
        let out = m * numeric::exp_nilpotent(&x);
        if !numeric::is_finite(&out) {
            return Err(Error::Overflow("frame evaluation".into()));
        }
        Ok(out)
    }

    /// Columns `w_α(z)`.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<CMatrix> {
        if z.iter().any(|c| c.im <= 0.0) {
            return Err(Error::OutsideUpperHalfSpace);
        }
        Ok(self.propagator(z)? * &self.basis_c)
    }

    /// Flat matrices `T_j` as complex matrices.
    pub fn monodromy_complex(&self, j: usize) -> CMatrix {
        self.tuple.matrices()[j].to_complex()
    }
}

/// Free-standing form of [`CanonicalFrame::evaluate`].
pub fn evaluate_frame(frame: &CanonicalFrame, z: &[Complex64]) -> Result<CMatrix> {
    frame.evaluate(z)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Residue `Res_j = A_j + N_j/(2πi)` of one divisor branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueEntry {
    pub a: ExactMatrix,
    pub n: ExactMatrix,
    /// Distinct eigenvalues, ascending.
    pub eigenvalues: Vec<BigRational>,
    /// Every eigenvalue lies in `(−1, 0]` and annihilates `A` exactly.
    pub contained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    pub entries: Vec<ResidueEntry>,
}

impl ResidueReport {
    pub fn contained(&self) -> bool {
        self.entries.iter().all(|e| e.contained)
    }
}

/// Residue eigenvalues of every branch, with an independent containment check:
/// the listed eigenvalues must be rationals in `(−1, 0]` and
/// `∏ (A − q) = 0` must hold exactly.
pub fn residues(tuple: &MonodromyTuple) -> ResidueReport {
    let entries = tuple
        .logs()
        .logs
        .iter()
        .map(|log| {
            let mut eigenvalues = log.a_eigenvalues();
            eigenvalues.sort();
            eigenvalues.dedup();
            let r = log.a.rows();
            let order = log.a.order();
            let id = ExactMatrix::identity(r, order);
            let annihilated = eigenvalues
                .iter()
                .fold(id.clone(), |acc, q| {
                    acc.mul(&log.a.sub(&id.scale(&CycScalar::from_rational(q.clone(), 1))))
                })
                .is_zero();
            let in_range = eigenvalues
                .iter()
                .all(|q| !q.is_positive() && *q > -BigRational::one());
            ResidueEntry {
                a: log.a.clone(),
                n: log.n.clone(),
                eigenvalues,
                contained: annihilated && in_range,
            }
        })
        .collect();
    ResidueReport { entries }
}

/// A finite Laurent polynomial in `s_1, …, s_n` with cyclotomic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, CycScalar>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponents: Vec<i64>, c: CycScalar) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Adds `c·s^e`; zero results are dropped so the support stays minimal.
    pub fn add_term(&mut self, exponents: Vec<i64>, c: CycScalar) {
        assert_eq!(exponents.len(), self.nvars, "exponent length mismatch");
        let entry = self.terms.remove(&exponents);
        let sum = match entry {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exponents, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &CycScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent of `s_j` over the support.
    pub fn lowest_exponent(&self, j: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[j]).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Applies `e ↦ f(e)` to every exponent vector.
    pub fn map_exponents(&self, mut f: impl FnMut(&[i64]) -> Vec<i64>) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(f(e), v.clone());
        }
        out
    }

    pub fn eval(&self, s: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (sj, &ej) in s.iter().zip(e) {
                t *= sj.powi(ej as i32);
            }
            acc += t;
        }
        acc
    }
}

/// `σ = Σ_α h_α(s) w_α` in a canonical frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSection {
    frame_tag: u64,
    nvars: usize,
    coeffs: Vec<LaurentPoly>,
    /// The listed monomials are only the lowest terms of each `h_α`.
    tail: bool,
}

impl LaurentSection {
    pub fn new(frame: &CanonicalFrame, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        if coeffs.len() != frame.rank() {
            return Err(Error::Dimension(format!(
                "section has {} coefficients for a rank-{} frame",
                coeffs.len(),
                frame.rank()
            )));
        }
        if coeffs.iter().any(|h| h.nvars() != frame.variables()) {
            return Err(Error::Dimension("Laurent variables do not match the frame".into()));
        }
        Ok(LaurentSection {
            frame_tag: frame.tag(),
            nvars: frame.variables(),
            coeffs,
            tail: false,
        })
    }

    pub fn zero(frame: &CanonicalFrame) -> Self {
        LaurentSection {
            frame_tag: frame.tag(),
            nvars: frame.variables(),
            coeffs: (0..frame.rank()).map(|_| LaurentPoly::zero(frame.variables())).collect(),
            tail: false,
        }
    }

    /// `c·s^e·w_α`.
    pub fn monomial(frame: &CanonicalFrame, alpha: usize, exponents: Vec<i64>, c: CycScalar) -> Result<Self> {
        let mut s = Self::zero(frame);
        if alpha >= frame.rank() || exponents.len() != frame.variables() {
            return Err(Error::Dimension("monomial does not fit the frame".into()));
        }
        s.coeffs[alpha] = LaurentPoly::monomial(exponents, c);
        Ok(s)
    }

    pub fn with_tail(mut self, tail: bool) -> Self {
        self.tail = tail;
        self
    }

    pub fn has_tail(&self) -> bool {
        self.tail
    }

    pub fn frame_tag(&self) -> u64 {
        self.frame_tag
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    pub fn check_frame(&self, frame: &CanonicalFrame) -> Result<()> {
        if self.frame_tag != frame.tag() {
            return Err(Error::FrameMismatch);
        }
        Ok(())
    }

    /// Flat-basis value of `σ` at `z`.
    pub fn evaluate(&self, frame: &CanonicalFrame, z: &[Complex64]) -> Result<DVector<Complex64>> {
        self.check_frame(frame)?;
        let w = frame.evaluate(z)?;
        let s: Vec<Complex64> = z.iter().map(|&zj| numeric::disk_coordinate(zj)).collect();
        let h = DVector::from_iterator(self.coeffs.len(), self.coeffs.iter().map(|p| p.eval(&s)));
        Ok(w * h)
    }
}

/// Pullback of a section under `s_j = s̃_j^{m_j}` to the unipotent cover.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub cover: CanonicalFrame,
    pub section: LaurentSection,
    /// `k_{αj}` of the original frame.
    pub exponents: Vec<Vec<u32>>,
    pub degrees: Vec<u32>,
    pub jacobian: bool,
}

/// Re-expresses `σ` on the cover with monodromy `T_j^{m_j}`.
///
/// `w_α` pulls back to `∏ s̃_j^{−k_{αj}} w̃_α` and `h_α(s)` to `h_α(s̃^m)`; with
/// `jacobian` the measure factor `∏ m_j s̃_j^{m_j − 1}` is folded in.
pub fn base_change_pullback(frame: &CanonicalFrame, section: &LaurentSection, jacobian: bool) -> Result<Pullback> {
    section.check_frame(frame)?;
    let ks = frame.adapted_exponents()?;
    let degrees = frame.tuple().indices().to_vec();
    let powers: Vec<ExactMatrix> = frame
        .tuple()
        .matrices()
        .iter()
        .zip(&degrees)
        .map(|(t, &m)| t.pow(m))
        .collect();
    let cover = CanonicalFrame::with_basis(validate_tuple(&powers)?, frame.basis().clone())?;
    let jac_const = degrees.iter().fold(CycScalar::one(1), |acc, &m| &acc * &CycScalar::from_int(m as i64));
    let coeffs = section
        .coeffs()
        .iter()
        .zip(&ks)
        .map(|(h, k)| {
            let mapped = h.map_exponents(|e| {
                e.iter()
                    .zip(&degrees)
                    .zip(k)
                    .map(|((&n, &m), &kj)| {
                        let base = m as i64 * n - kj as i64;
                        if jacobian {
                            base + m as i64 - 1
                        } else {
                            base
                        }
                    })
                    .collect()
            });
            if jacobian {
                mapped.scale(&jac_const)
            } else {
                mapped
            }
        })
        .collect();
    let mut lifted = LaurentSection::new(&cover, coeffs)?;
    lifted.tail = section.tail;
    Ok(Pullback {
        cover,
        section: lifted,
        exponents: ks,
        degrees,
        jacobian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(ms: &[ExactMatrix], basis: FrameBasis) -> CanonicalFrame {
        CanonicalFrame::new(validate_tuple(ms).unwrap(), basis).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn residue_examples() {
        let t = validate_tuple(&[ExactMatrix::from_ints(&[&[1, 1], &[0, 1]])]).unwrap();
        let r = residues(&t);
        assert_eq!(r.entries[0].eigenvalues, alloc::vec![q(0, 1)]);
        assert!(r.contained());

        let t = validate_tuple(&[ExactMatrix::identity(2, 1).neg()]).unwrap();
        assert_eq!(residues(&t).entries[0].eigenvalues, alloc::vec![q(-1, 2)]);

        let d = ExactMatrix::diagonal(&[CycScalar::root_of_unity(3, 1), CycScalar::root_of_unity(3, 2)]);
        let r = residues(&validate_tuple(&[d]).unwrap());
        assert_eq!(r.entries[0].eigenvalues, alloc::vec![q(-2, 3), q(-1, 3)]);
        assert!(r.contained());
    }

    #[test]
    fn frame_examples() {
        let z = Complex64::new(0.3, 1.7);
        let f = frame(&[ExactMatrix::identity(2, 1)], FrameBasis::Standard);
        let w = f.evaluate(&[z]).unwrap();
        assert!((w.clone() - CMatrix::identity(2, 2)).norm() < 1e-14);

        let f = frame(&[ExactMatrix::from_ints(&[&[1, 1], &[0, 1]])], FrameBasis::Standard);
        let w = f.evaluate(&[z]).unwrap();
        assert!((w[(0, 1)] - z).norm() < 1e-14);
        assert!((w[(1, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        let f = frame(&[ExactMatrix::identity(2, 1).neg()], FrameBasis::Standard);
        let w = f.evaluate(&[z]).unwrap();
        let expected = (Complex64::new(0.0, -core::f64::consts::PI) * z).exp();
        assert!((w[(0, 0)] - expected).norm() < 1e-14);
        let w1 = f.evaluate(&[z + 1.0]).unwrap();
        assert!((w1 + w).norm() < 1e-12);
    }

    #[test]
    fn lower_half_plane_rejected() {
        let f = frame(&[ExactMatrix::identity(1, 1)], FrameBasis::Standard);
        assert_eq!(
            f.evaluate(&[Complex64::new(0.0, -1.0)]).unwrap_err(),
            Error::OutsideUpperHalfSpace
        );
    }

    #[test]
    fn pullback_examples() {
        let one = CycScalar::one(1);
        let f = frame(&[ExactMatrix::from_ints(&[&[1, 1], &[0, 1]])], FrameBasis::Standard);
        let s = LaurentSection::monomial(&f, 1, alloc::vec![-1], one.clone()).unwrap();
        let p = base_change_pullback(&f, &s, false).unwrap();
        assert_eq!(p.section.coeffs(), s.coeffs());

        let f = frame(&[ExactMatrix::identity(1, 1).neg()], FrameBasis::Standard);
        let s = LaurentSection::monomial(&f, 0, alloc::vec![0], one.clone()).unwrap();
        let p = base_change_pullback(&f, &s, false).unwrap();
        assert_eq!(p.section.coeffs()[0].lowest_exponent(0), Some(-1));

        let f = frame(&[ExactMatrix::diagonal(&[CycScalar::root_of_unity(3, 1)])], FrameBasis::Standard);
        assert_eq!(f.adapted_exponents().unwrap(), alloc::vec![alloc::vec![2]]);
        let s = LaurentSection::monomial(&f, 0, alloc::vec![1], one).unwrap();
        let p = base_change_pullback(&f, &s, false).unwrap();
        assert_eq!(p.section.coeffs()[0].lowest_exponent(0), Some(1));
    }

    #[test]
    fn unadapted_frame_rejected() {
        let swap = ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        let f = frame(&[swap.clone()], FrameBasis::Standard);
        let s = LaurentSection::zero(&f);
        assert!(matches!(
            base_change_pullback(&f, &s, false),
            Err(Error::FrameNotAdapted(_))
        ));
        let f = frame(&[swap], FrameBasis::EigenAdapted);
        let s = LaurentSection::zero(&f);
        assert!(base_change_pullback(&f, &s, false).is_ok());
    }

    #[test]
    fn frame_mismatch_detected() {
        let a = frame(&[ExactMatrix::identity(1, 1)], FrameBasis::Standard);
        let b = frame(&[ExactMatrix::identity(1, 1).neg()], FrameBasis::Standard);
        let s = LaurentSection::zero(&a);
        assert_eq!(s.check_frame(&b), Err(Error::FrameMismatch));
    }
}
