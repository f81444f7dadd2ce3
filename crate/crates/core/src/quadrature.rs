//! Numerical oracle for the integrability verdicts: partial integrals over
//! shrinking annuli and a trend classifier for their increments.
//!
//! Radial integrals are computed in `u = −log r`, where the cutoffs `10^{-t}`
//! are equally spaced; each decade is integrated with adaptive Gauss–Kronrod
//! (7/15 points).

use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymnorm::MetricEvaluator;
use crate::error::{Error, Result};
use crate::lattice::{CanonicalFrame, LaurentSection};
use crate::numeric::TWO_PI;

pub const DEFAULT_TOLERANCE: f64 = 1e-4;

/// `10^{-1}, …, 10^{-8}`.
pub fn default_cutoffs() -> Vec<f64> {
    (1..=8).map(|t| libm::pow(10.0, -(t as f64))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classification {
    Convergent { value: f64 },
    /// `rate` is the ratio of the last two increment densities.
    Divergent { rate: f64 },
    Inconclusive,
}

impl Classification {
    pub fn is_convergent(&self) -> bool {
        matches!(self, Classification::Convergent { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureReport {
    /// Inner radii; extended cutoffs deep enough to underflow are stored as 0.
    pub cutoffs: Vec<f64>,
    /// `−log` of each cutoff, always finite.
    pub log_cutoffs: Vec<f64>,
    pub partials: Vec<f64>,
    pub classification: Classification,
    pub tolerance: f64,
    pub evaluations: usize,
    pub skipped: usize,
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK_WEIGHTS[7] * fc;
    let mut g = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adaptive(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, rel: f64, depth: u32) -> f64 {
    let (v, err) = gauss_kronrod(f, a, b);
    if depth == 0 || err <= rel * v.abs() || err < 1e-300 {
        return v;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, rel, depth - 1) + adaptive(f, m, b, rel, depth - 1)
}

/// Classifies partial sums taken at cutoffs `u_t` (increasing).
///
/// Increments are divided by their cell length, giving an average density
/// per unit `u`. A non-decreasing density means divergence. A shrinking one
/// is fitted to a power law `ρ ∝ ū^{−p}` over the last two cells; `p > 1.5` is
/// read as convergence, which separates the harmonic tail (`p ≈ 1`) from
/// `u^{−2}` (`p ≈ 2`).
pub fn classify(us: &[f64], partials: &[f64]) -> Classification {
    let n = partials.len();
    if n < 3 {
        return Classification::Inconclusive;
    }
    let d_last = (partials[n - 1] - partials[n - 2]) / (us[n - 1] - us[n - 2]);
    let d_prev = (partials[n - 2] - partials[n - 3]) / (us[n - 2] - us[n - 3]);
    if d_last == 0.0 {
        return Classification::Convergent { value: partials[n - 1] };
    }
    if d_prev <= 0.0 {
        return Classification::Inconclusive;
    }
    let q = d_last / d_prev;
    if q >= 1.0 {
        return Classification::Divergent { rate: q };
    }
    let mid_last = 0.5 * (us[n - 1] + us[n - 2]);
    let mid_prev = 0.5 * (us[n - 2] + us[n - 3]);
    let p = libm::log(d_prev / d_last) / libm::log(mid_last / mid_prev);
    if p > 1.5 {
        Classification::Convergent { value: partials[n - 1] }
    } else {
        Classification::Divergent { rate: q }
    }
}

const MAX_EXTENSIONS: usize = 16;

/// Drives partial sums over cutoffs, doubling the last `u` while a convergent
/// trend has not yet reached `tol` relative accuracy.
fn run(
    mut increment: impl FnMut(f64, f64) -> Result<f64>,
    u0: f64,
    us: &[f64],
    tol: f64,
    extend: bool,
) -> Result<(Vec<f64>, Vec<f64>, Classification)> {
    let mut log_cutoffs = Vec::with_capacity(us.len());
    let mut partials = Vec::with_capacity(us.len());
    let mut lo = u0;
    let mut acc = 0.0;
    for &u in us {
        acc += increment(lo, u)?;
        log_cutoffs.push(u);
        partials.push(acc);
        lo = u;
    }
    let mut class = classify(&log_cutoffs, &partials);
    let mut extensions = 0;
    while extend {
        let Classification::Convergent { value } = class else { break };
        let n = partials.len();
        if partials[n - 1] - partials[n - 2] <= tol * value.abs() {
            break;
        }
        if extensions == MAX_EXTENSIONS {
            class = Classification::Inconclusive;
            break;
        }
        let u = 2.0 * lo;
        acc += increment(lo, u)?;
        log_cutoffs.push(u);
        partials.push(acc);
        lo = u;
        extensions += 1;
        class = classify(&log_cutoffs, &partials);
    }
    Ok((log_cutoffs, partials, class))
}

fn to_log(cutoffs: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(cutoffs.len());
    let mut last = 0.0;
    for &c in cutoffs {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidInput("cutoffs must lie in (0, 1)".into()));
        }
        let u = -libm::log(c);
        if u <= last {
            return Err(Error::InvalidInput("cutoffs must decrease".into()));
        }
        out.push(u);
        last = u;
    }
    Ok(out)
}

/// `2π ∫_c^ρ r^{2i+1} (−log r)^k dr` for every cutoff `c`.
///
/// The outer radius is `ρ = 1` for `k ≥ 0` and `ρ = e^{−1}` for `k < 0`, where
/// `(−log r)^k` blows up at `r = 1`; only the behaviour at `0` matters.
pub fn log_weighted_disk_integral(k: i32, i: f64, cutoffs: &[f64], tol: f64) -> Result<QuadratureReport> {
    let us = to_log(cutoffs)?;
    let u0 = if k < 0 { 1.0 } else { 0.0 };
    if us.first().is_some_and(|&u| u <= u0) {
        return Err(Error::InvalidInput("first cutoff must lie inside the outer radius".into()));
    }
    let mut evaluations = 0usize;
    let (log_cutoffs, partials, classification) = run(
        |a, b| {
            let mut f = |u: f64| {
                evaluations += 1;
                TWO_PI * libm::exp(-(2.0 * i + 2.0) * u) * libm::pow(u, k as f64)
            };
            Ok(adaptive(&mut f, a, b, 1e-12, 30))
        },
        u0,
        &us,
        tol,
        true,
    )?;
    Ok(QuadratureReport {
        cutoffs: log_cutoffs.iter().map(|&u| libm::exp(-u)).collect(),
        log_cutoffs,
        partials,
        classification,
        tolerance: tol,
        evaluations,
        skipped: 0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionQuadrature {
    pub cutoffs: Vec<f64>,
    pub tol: f64,
    /// Trapezoid points on each circle.
    pub angles: usize,
    pub seed: u64,
    /// Evaluation budget; exceeding it yields an inconclusive report.
    pub max_evaluations: usize,
}

impl Default for SectionQuadrature {
    fn default() -> Self {
        SectionQuadrature {
            cutoffs: default_cutoffs(),
            tol: DEFAULT_TOLERANCE,
            angles: 16,
            seed: 0,
            max_evaluations: 2_000_000,
        }
    }
}

/// `∫ |σ|² dμ` over `{c ≤ |s| < 1}` for one-variable sections, with `dμ` the
/// Lebesgue measure on the disk.
///
/// Points where the metric is unavailable are skipped and counted; more than
/// 10% skipped makes the classification inconclusive.
pub fn section_l2_estimate(
    section: &LaurentSection,
    frame: &CanonicalFrame,
    metric: &dyn MetricEvaluator,
    config: &SectionQuadrature,
) -> Result<QuadratureReport> {
    section.check_frame(frame)?;
    if frame.variables() != 1 {
        return Err(Error::InvalidInput("section quadrature supports one variable".into()));
    }
    if section.has_tail() {
        return Err(Error::InvalidInput("sections with symbolic tails cannot be integrated".into()));
    }
    if config.angles == 0 {
        return Err(Error::InvalidInput("at least one angle is required".into()));
    }
    let us = to_log(&config.cutoffs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let shift: f64 = rng.gen();
    let mut evaluations = 0usize;
    let mut skipped = 0usize;
    let mut failure: Option<Error> = None;
    let a = config.angles as f64;
    let result = {
        let mut integrand = |u: f64| -> f64 {
            // |σ|² r dr dθ = |σ|² e^{−2u} du dθ
            let mut acc = 0.0;
            for t in 0..config.angles {
                let x = (t as f64 + shift) / a;
                let z = Complex64::new(x, u / TWO_PI);
                evaluations += 1;
                let value = section
                    .evaluate(frame, &[z])
                    .and_then(|v: DVector<Complex64>| Ok(metric.norm_squared(&v, &[z])));
                match value {
                    Ok(Some(n)) if n.is_finite() => acc += n,
                    Ok(_) => skipped += 1,
                    Err(e) => {
                        skipped += 1;
                        failure.get_or_insert(e);
                    }
                }
            }
            acc * (TWO_PI / a) * libm::exp(-2.0 * u)
        };
        if section.is_zero() {
            let zeros = alloc::vec![0.0; us.len()];
            Ok((us.clone(), zeros.clone(), classify(&us, &zeros)))
        } else {
            run(
                |lo, hi| Ok(adaptive(&mut integrand, lo, hi, 1e-10, 12)),
                0.0,
                &us,
                config.tol,
                true,
            )
        }
    };
    let (log_cutoffs, partials, mut classification) = result?;
    if let Some(Error::Overflow(_)) = failure {
        classification = Classification::Inconclusive;
    }
    if evaluations > 0 && skipped * 10 > evaluations {
        classification = Classification::Inconclusive;
    }
    if evaluations > config.max_evaluations {
        classification = Classification::Inconclusive;
    }
    Ok(QuadratureReport {
        cutoffs: log_cutoffs.iter().map(|&u| libm::exp(-u)).collect(),
        log_cutoffs,
        partials,
        classification,
        tolerance: config.tol,
        evaluations,
        skipped,
    })
}
