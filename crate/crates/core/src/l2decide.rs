//! Decides whether a Laurent section is locally L² for the model metric and
//! whether it lies in the canonical lattice.
//!
//! Near the `j`-th divisor a homogeneous component of weight degree `l` and
//! lowest `s_j`-exponent `n` contributes `∫ r^{2n+1} (−log r)^l dr`, which is
//! finite iff `n > −1`, or `n = −1` and `l ≤ −2`. The second case is the
//! boundary where the coarser rule "finite iff `n ≥ 0`" disagrees with the
//! integral; it is reported, never silently resolved.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactlin::{CycScalar, ExactMatrix, Subspace};
use crate::lattice::{base_change_pullback, CanonicalFrame, LaurentPoly, LaurentSection, Pullback};
use crate::weight::{multi_grading, weight_filtration};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Integrability {
    pub convergent: bool,
    pub boundary: bool,
}

/// Convergence of `∫₀¹ r^{2i+1} (−log r)^k dr`.
pub fn laurent_integrability(k: i64, i: &BigRational) -> Integrability {
    let minus_one = -BigRational::one();
    let boundary = *i == minus_one && k <= -2;
    Integrability {
        convergent: *i > minus_one || boundary,
        boundary,
    }
}

/// A basis adapted to `W(N_j)`: columns with their weight degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousBasis {
    pub vectors: ExactMatrix,
    pub degrees: Vec<i32>,
}

impl HomogeneousBasis {
    /// The `Q = I` orthogonal grading of `W(n)`.
    pub fn of(n: &ExactMatrix, center: i32) -> Result<Self> {
        let r = n.rows();
        let g = multi_grading(core::slice::from_ref(n), &ExactMatrix::identity(r, n.order()), center)?;
        Ok(HomogeneousBasis {
            vectors: g.adapted_basis(),
            degrees: g.column_degrees().into_iter().map(|d| d[0]).collect(),
        })
    }

    /// Whether the columns of degree `≤ l` span `W_l(n)` for every `l`.
    pub fn splits(&self, n: &ExactMatrix, center: i32) -> Result<bool> {
        let r = n.rows();
        if self.vectors.rows() != r || self.vectors.cols() != r || self.degrees.len() != r {
            return Ok(false);
        }
        let w = weight_filtration(n, center)?;
        for l in w.lowest() - 1..=w.highest() + 1 {
            let cols: Vec<_> = (0..r)
                .filter(|&c| self.degrees[c] <= l)
                .map(|c| self.vectors.column(c))
                .collect();
            if Subspace::span(r, &cols) != w.step(l) || cols.len() != w.dim(l) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One `(component, divisor)` verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// 1-based index into the homogeneous basis of divisor `j`.
    pub alpha: usize,
    /// 1-based divisor index.
    pub j: usize,
    pub degree: i32,
    pub exponent: i64,
    pub integrable: bool,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Implication {
    Pass,
    /// Not L², nothing to check.
    Vacuous,
    /// A boundary cell is involved.
    Excluded,
    Fail(Certificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionReport {
    pub certificates: Vec<Certificate>,
    /// `(α, j, lowest exponent)` of the frame coefficients, 1-based.
    pub lattice_exponents: Vec<(usize, usize, i64)>,
    pub is_l2: bool,
    pub in_lattice: bool,
    pub boundary: bool,
}

impl DecisionReport {
    /// For sections of `F^q V` lattice membership is membership in the lowest
    /// Hodge-module piece.
    pub fn in_lowest_piece(&self) -> bool {
        self.in_lattice
    }
}

/// Decides with the default homogeneous bases of every `W(N_j)`.
pub fn decide(section: &LaurentSection, frame: &CanonicalFrame, center: i32) -> Result<DecisionReport> {
    let bases = frame
        .tuple()
        .logs()
        .logs
        .iter()
        .map(|l| HomogeneousBasis::of(&l.n, center))
        .collect::<Result<Vec<_>>>()?;
    decide_with_bases(section, frame, &bases)
}

/// Decides using caller-supplied homogeneous bases (one per variable); they
/// must split the weight filtrations, which the caller is trusted to ensure
/// (see [`HomogeneousBasis::splits`]).
pub fn decide_with_bases(
    section: &LaurentSection,
    frame: &CanonicalFrame,
    bases: &[HomogeneousBasis],
) -> Result<DecisionReport> {
    section.check_frame(frame)?;
    if !frame.tuple().is_unipotent() {
        return Err(Error::InvalidInput(
            "decide needs unipotent monodromy; reduce the section to the cover first".into(),
        ));
    }
    let n = frame.variables();
    if bases.len() != n {
        return Err(Error::Dimension("one homogeneous basis per variable is required".into()));
    }
    let mut lattice_exponents = Vec::new();
    for (alpha, h) in section.coeffs().iter().enumerate() {
        for j in 0..n {
            if let Some(e) = h.lowest_exponent(j) {
                lattice_exponents.push((alpha + 1, j + 1, e));
            }
        }
    }
    let in_lattice = lattice_exponents.iter().all(|&(_, _, e)| e >= 0);
    let mut certificates = Vec::new();
    for (j, basis) in bases.iter().enumerate() {
        // v_α = Σ_β C_{βα} u_β, so the u-coefficients are g = C h
        let c = basis.vectors.inverse()?.mul(frame.basis());
        for (beta, &degree) in basis.degrees.iter().enumerate() {
            let mut g = LaurentPoly::zero(n);
            for (alpha, h) in section.coeffs().iter().enumerate() {
                let cba = c.get(beta, alpha);
                if !cba.is_zero() {
                    g = g.add(&h.scale(cba));
                }
            }
            let Some(exponent) = g.lowest_exponent(j) else { continue };
            let v = laurent_integrability(degree as i64, &BigRational::from_integer(BigInt::from(exponent)));
            certificates.push(Certificate {
                alpha: beta + 1,
                j: j + 1,
                degree,
                exponent,
                integrable: v.convergent,
                boundary: v.boundary,
            });
        }
    }
    Ok(DecisionReport {
        is_l2: certificates.iter().all(|c| c.integrable),
        boundary: certificates.iter().any(|c| c.boundary),
        certificates,
        lattice_exponents,
        in_lattice,
    })
}

/// `L² ⇒ lattice`, skipping boundary-flagged reports.
pub fn check_implication(report: &DecisionReport) -> Implication {
    if report.boundary {
        return Implication::Excluded;
    }
    if !report.is_l2 {
        return Implication::Vacuous;
    }
    if report.in_lattice {
        return Implication::Pass;
    }
    let witness = report
        .certificates
        .iter()
        .find(|c| c.exponent < 0)
        .cloned()
        .unwrap_or(Certificate {
            alpha: 0,
            j: 0,
            degree: 0,
            exponent: 0,
            integrable: true,
            boundary: false,
        });
    Implication::Fail(witness)
}

/// `n ↦ m n + m − 1 − k` for one frame coefficient and divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentRecord {
    pub alpha: usize,
    pub j: usize,
    pub m: u32,
    pub k: u32,
    pub exponent: i64,
    pub cover_exponent: i64,
}

impl ExponentRecord {
    /// Both sides of `m n + m − 1 − k ≥ 0 ⇔ n ≥ 0`.
    pub fn sides(&self) -> (bool, bool) {
        (self.exponent >= 0, self.cover_exponent >= 0)
    }
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub pullback: Pullback,
    pub records: Vec<ExponentRecord>,
}

impl Reduction {
    pub fn consistent(&self) -> bool {
        self.records.iter().all(|r| {
            let (a, b) = r.sides();
            a == b
        })
    }
}

/// Pulls `σ` back to the unipotent cover with the measure Jacobian included.
pub fn reduce_quasi_unipotent(section: &LaurentSection, frame: &CanonicalFrame) -> Result<Reduction> {
    let pullback = base_change_pullback(frame, section, true)?;
    let mut records = Vec::new();
    for (alpha, (h, ks)) in section.coeffs().iter().zip(&pullback.exponents).enumerate() {
        for (j, (&m, &k)) in pullback.degrees.iter().zip(ks).enumerate() {
            if let Some(n) = h.lowest_exponent(j) {
                let cover_exponent = pullback.section.coeffs()[alpha]
                    .lowest_exponent(j)
                    .unwrap_or(i64::MAX);
                records.push(ExponentRecord {
                    alpha: alpha + 1,
                    j: j + 1,
                    m,
                    k,
                    exponent: n,
                    cover_exponent,
                });
            }
        }
    }
    Ok(Reduction { pullback, records })
}

/// A decision for a possibly quasi-unipotent frame: the cover decides
/// L²-ness, and lattice membership is read back through the exponent map.
#[derive(Clone, Debug)]
pub struct QuasiUnipotentDecision {
    pub cover: DecisionReport,
    pub records: Vec<ExponentRecord>,
    pub in_lattice: bool,
    pub consistent: bool,
}

pub fn decide_quasi_unipotent(section: &LaurentSection, frame: &CanonicalFrame, center: i32) -> Result<QuasiUnipotentDecision> {
    let red = reduce_quasi_unipotent(section, frame)?;
    let cover = decide(&red.pullback.section, &red.pullback.cover, center)?;
    let in_lattice = red.records.iter().all(|r| r.exponent >= 0);
    Ok(QuasiUnipotentDecision {
        consistent: red.consistent() && cover.in_lattice == in_lattice,
        in_lattice,
        records: red.records,
        cover,
    })
}

/// A convenience for tests and the CLI: `c·s^e·w_α` with rational `c`.
pub fn rational_monomial(frame: &CanonicalFrame, alpha: usize, exponents: Vec<i64>, num: i64, den: i64) -> Result<LaurentSection> {
    LaurentSection::monomial(frame, alpha, exponents, CycScalar::from_frac(num, den))
}
