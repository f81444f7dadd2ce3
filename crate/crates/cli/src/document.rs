//! The input document and its conversion into core types.
//!
//! Every number in a document is exact: cyclotomic entries are integer
//! coefficient lists over powers of `ζ_M` with a positive denominator, and
//! rationals are `[num, den]` pairs. Conversion errors carry a JSON-path-like
//! location such as `matrices[0][1][1].den`.

use hodge_lattice_core::exactlin::{CycScalar, ExactMatrix};
use hodge_lattice_core::hodgenum::NilpotentOrbitVHS;
use hodge_lattice_core::lattice::{CanonicalFrame, FrameBasis, LaurentPoly, LaurentSection};
use hodge_lattice_core::monodromy::MonodromyTuple;
use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One cyclotomic number `(Σ_i num[i] ζ^i) / den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub num: Vec<i64>,
    pub den: i64,
}

pub type Matrix = Vec<Vec<Entry>>;

/// `[num, den]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio(pub i64, pub i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRatio {
    pub re: Ratio,
    #[serde(default = "zero_ratio")]
    pub im: Ratio,
}

fn zero_ratio() -> Ratio {
    Ratio(0, 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagStep {
    pub p: i32,
    /// 1-based standard basis indices spanning `F^p`.
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VhsBlock {
    pub weight: i32,
    pub polarization: Vec<Vec<Ratio>>,
    pub flag: Vec<FlagStep>,
    /// Defaults to the logarithms of the monodromy matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotents: Option<Vec<Matrix>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    Standard,
    Eigen,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    /// 1-based frame index.
    pub alpha: usize,
    pub exponents: Vec<i64>,
    pub coeff: ComplexRatio,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionBlock {
    pub basis: BasisChoice,
    pub terms: Vec<Term>,
    #[serde(default)]
    pub tail: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionBlock {
    pub a: Ratio,
    pub epsilon: Ratio,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub rank: usize,
    pub n: usize,
    pub cyclotomic_order: u32,
    pub matrices: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vhs: Option<VhsBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Matrix>,
    /// Points of the upper half-space, `n` coordinates each.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<ComplexRatio>>>,
    /// Flat vectors to measure, `rank` coordinates each.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<ComplexRatio>>>,
}

fn input(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

impl InputDocument {
    /// Parses a document, reporting syntax and schema errors with line and column.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: InputDocument = serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("line {} column {}: {}", e.line(), e.column(), e))
        })?;
        doc.check_shape()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    fn check_shape(&self) -> Result<(), CliError> {
        if self.rank == 0 {
            return Err(input("rank", "must be positive"));
        }
        if self.cyclotomic_order == 0 {
            return Err(input("cyclotomic_order", "must be positive"));
        }
        if self.matrices.len() != self.n {
            return Err(input(
                "matrices",
                format!("expected {} matrices, found {}", self.n, self.matrices.len()),
            ));
        }
        for (j, m) in self.matrices.iter().enumerate() {
            check_square(&format!("matrices[{j}]"), m, self.rank)?;
        }
        if let Some(q) = &self.q {
            check_square("q", q, self.rank)?;
        }
        if let Some(v) = &self.vhs {
            if v.polarization.len() != self.rank {
                return Err(input("vhs.polarization", format!("expected {} rows", self.rank)));
            }
            for (r, row) in v.polarization.iter().enumerate() {
                if row.len() != self.rank {
                    return Err(input(&format!("vhs.polarization[{r}]"), format!("expected {} entries", self.rank)));
                }
                for (c, x) in row.iter().enumerate() {
                    check_ratio(&format!("vhs.polarization[{r}][{c}]"), x)?;
                }
            }
            for (i, step) in v.flag.iter().enumerate() {
                for (t, &b) in step.basis.iter().enumerate() {
                    if b == 0 || b > self.rank {
                        return Err(input(
                            &format!("vhs.flag[{i}].basis[{t}]"),
                            format!("index {b} outside 1..={}", self.rank),
                        ));
                    }
                }
            }
            if let Some(ns) = &v.nilpotents {
                for (j, m) in ns.iter().enumerate() {
                    check_square(&format!("vhs.nilpotents[{j}]"), m, self.rank)?;
                }
            }
        }
        if let Some(s) = &self.section {
            for (i, t) in s.terms.iter().enumerate() {
                if t.alpha == 0 || t.alpha > self.rank {
                    return Err(input(
                        &format!("section.terms[{i}].alpha"),
                        format!("index {} outside 1..={}", t.alpha, self.rank),
                    ));
                }
                if t.exponents.len() != self.n {
                    return Err(input(
                        &format!("section.terms[{i}].exponents"),
                        format!("expected {} exponents", self.n),
                    ));
                }
                check_complex(&format!("section.terms[{i}].coeff"), &t.coeff)?;
            }
        }
        if let Some(r) = &self.region {
            check_ratio("region.a", &r.a)?;
            check_ratio("region.epsilon", &r.epsilon)?;
        }
        for (name, list, len) in [
            ("points", &self.points, self.n),
            ("vectors", &self.vectors, self.rank),
        ] {
            if let Some(list) = list {
                for (i, p) in list.iter().enumerate() {
                    if p.len() != len {
                        return Err(input(&format!("{name}[{i}]"), format!("expected {len} coordinates")));
                    }
                    for (c, x) in p.iter().enumerate() {
                        check_complex(&format!("{name}[{i}][{c}]"), x)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn monodromy(&self) -> Result<Vec<ExactMatrix>, CliError> {
        self.matrices
            .iter()
            .enumerate()
            .map(|(j, m)| matrix(&format!("matrices[{j}]"), m, self.cyclotomic_order))
            .collect()
    }

    pub fn q_form(&self) -> Result<ExactMatrix, CliError> {
        match &self.q {
            Some(q) => matrix("q", q, self.cyclotomic_order),
            None => Ok(ExactMatrix::identity(self.rank, 1)),
        }
    }

    /// The orbit of the `vhs` block; nilpotents default to `logs`.
    pub fn orbit(&self, logs: &[ExactMatrix]) -> Result<Option<NilpotentOrbitVHS>, CliError> {
        let Some(v) = &self.vhs else {
            return Ok(None);
        };
        let s = ExactMatrix::from_fn(self.rank, self.rank, |r, c| rational(v.polarization[r][c]));
        let flag = v
            .flag
            .iter()
            .map(|step| {
                let cols: Vec<Vec<CycScalar>> = step
                    .basis
                    .iter()
                    .map(|&b| {
                        (0..self.rank)
                            .map(|i| CycScalar::from_int(i64::from(i + 1 == b)))
                            .collect()
                    })
                    .collect();
                (step.p, ExactMatrix::from_columns(self.rank, &cols))
            })
            .collect();
        let nilpotents = match &v.nilpotents {
            Some(ns) => ns
                .iter()
                .enumerate()
                .map(|(j, m)| matrix(&format!("vhs.nilpotents[{j}]"), m, self.cyclotomic_order))
                .collect::<Result<Vec<_>, _>>()?,
            None => logs.to_vec(),
        };
        NilpotentOrbitVHS::new(v.weight, s, flag, nilpotents)
            .map(Some)
            .map_err(|e| input("vhs", e))
    }

    pub fn section(&self, frame: &CanonicalFrame) -> Result<Option<LaurentSection>, CliError> {
        let Some(s) = &self.section else {
            return Ok(None);
        };
        let mut polys = vec![LaurentPoly::zero(self.n); self.rank];
        for t in &s.terms {
            polys[t.alpha - 1].add_term(t.exponents.clone(), cyc_complex(t.coeff));
        }
        LaurentSection::new(frame, polys)
            .map(|s2| Some(s2.with_tail(s.tail)))
            .map_err(|e| input("section", e))
    }

    pub fn frame_basis(&self) -> FrameBasis {
        match self.section.as_ref().map(|s| s.basis) {
            Some(BasisChoice::Eigen) => FrameBasis::EigenAdapted,
            _ => FrameBasis::Standard,
        }
    }

    pub fn frame(&self, tuple: MonodromyTuple) -> Result<CanonicalFrame, CliError> {
        CanonicalFrame::new(tuple, self.frame_basis()).map_err(|e| input("section.basis", e))
    }

    pub fn points(&self) -> Option<Vec<Vec<Complex64>>> {
        self.points
            .as_ref()
            .map(|ps| ps.iter().map(|p| p.iter().map(|c| complex(*c)).collect()).collect())
    }

    /// Listed vectors, or the standard basis.
    pub fn vectors(&self) -> Vec<DVector<Complex64>> {
        match &self.vectors {
            Some(vs) => vs
                .iter()
                .map(|v| DVector::from_iterator(self.rank, v.iter().map(|c| complex(*c))))
                .collect(),
            None => (0..self.rank)
                .map(|i| {
                    DVector::from_fn(self.rank, |k, _| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
                })
                .collect(),
        }
    }
}

fn check_square(path: &str, m: &Matrix, rank: usize) -> Result<(), CliError> {
    if m.len() != rank {
        return Err(input(path, format!("expected {rank} rows, found {}", m.len())));
    }
    for (r, row) in m.iter().enumerate() {
        if row.len() != rank {
            return Err(input(&format!("{path}[{r}]"), format!("expected {rank} entries, found {}", row.len())));
        }
        for (c, e) in row.iter().enumerate() {
            if e.den <= 0 {
                return Err(input(&format!("{path}[{r}][{c}].den"), "denominator must be positive"));
            }
        }
    }
    Ok(())
}

fn check_ratio(path: &str, x: &Ratio) -> Result<(), CliError> {
    if x.1 <= 0 {
        return Err(input(path, "denominator must be positive"));
    }
    Ok(())
}

fn check_complex(path: &str, x: &ComplexRatio) -> Result<(), CliError> {
    check_ratio(&format!("{path}.re"), &x.re)?;
    check_ratio(&format!("{path}.im"), &x.im)
}

fn matrix(path: &str, m: &Matrix, order: u32) -> Result<ExactMatrix, CliError> {
    let mut entries = Vec::new();
    for (r, row) in m.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            let den = BigInt::from(e.den);
            let coeffs = e
                .num
                .iter()
                .map(|&x| BigRational::new(BigInt::from(x), den.clone()))
                .collect();
            let x = CycScalar::from_power_coeffs(coeffs, order)
                .map_err(|err| input(&format!("{path}[{r}][{c}]"), err))?;
            entries.push(x);
        }
    }
    ExactMatrix::new(m.len(), m.len(), entries).map_err(|e| input(path, e))
}

pub fn rational(x: Ratio) -> CycScalar {
    CycScalar::from_frac(x.0, x.1)
}

/// `re + im·ζ₄`.
pub fn cyc_complex(x: ComplexRatio) -> CycScalar {
    let re = rational(x.re);
    if x.im.0 == 0 {
        return re;
    }
    &re + &(&rational(x.im) * &CycScalar::root_of_unity(4, 1))
}

pub fn ratio_f64(x: Ratio) -> f64 {
    BigRational::new(x.0.into(), x.1.into()).to_f64().unwrap_or(f64::NAN)
}

pub fn complex(x: ComplexRatio) -> Complex64 {
    Complex64::new(ratio_f64(x.re), ratio_f64(x.im))
}
