//! The model metric attached to a multigrading and its comparison with true
//! Hodge metrics on sectorial regions.
//!
//! For `v = Σ_l v_l` the model norm is
//! `Σ_l ∏_{j<n} (log|s_j| / log|s_{j+1}|)^{l_j} · (−log|s_n|)^{l_n} · |v_l|²_{Q_l}`.

use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hodgenum::{orbit_hodge_metric, NilpotentOrbitVHS};
use crate::numeric::{self, CMatrix};
use crate::weight::MultiGrading;

#[derive(Clone, Debug)]
struct Piece {
    degrees: Vec<i32>,
    start: usize,
    len: usize,
    q: CMatrix,
}

/// Numeric form of a [`MultiGrading`] ready for norm evaluation.
#[derive(Clone, Debug)]
pub struct ModelMetric {
    grading: MultiGrading,
    inverse: CMatrix,
    pieces: Vec<Piece>,
}

impl ModelMetric {
    pub fn new(grading: MultiGrading) -> Result<Self> {
        let basis = grading.adapted_basis().to_complex();
        let inverse = basis
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("grading basis is singular".into()))?;
        let mut pieces = Vec::new();
        let mut start = 0;
        for p in grading.pieces() {
            let len = p.basis.cols();
            pieces.push(Piece {
                degrees: p.degrees.clone(),
                start,
                len,
                q: grading.restricted_form(p).to_complex(),
            });
            start += len;
        }
        Ok(ModelMetric {
            grading,
            inverse,
            pieces,
        })
    }

    pub fn grading(&self) -> &MultiGrading {
        &self.grading
    }

    pub fn variables(&self) -> usize {
        self.grading.variables()
    }

    /// `∏_j factor_j^{l_j}` at a point with `|s_j| = e^{−2π y_j}`.
    pub fn weight_factor(&self, degrees: &[i32], y: &[f64]) -> f64 {
        let n = y.len();
        let mut f = 1.0;
        for (j, &l) in degrees.iter().enumerate() {
            let base = if j + 1 < n {
                y[j] / y[j + 1]
            } else {
                numeric::TWO_PI * y[j]
            };
            f *= libm::pow(base, l as f64);
        }
        f
    }

    /// Model norm squared with the point given by `Im z_j = −log|s_j| / 2π`.
    pub fn norm_squared_at_heights(&self, v: &DVector<Complex64>, y: &[f64]) -> f64 {
        let c = &self.inverse * v;
        let mut acc = 0.0;
        for p in &self.pieces {
            let comp = c.rows(p.start, p.len);
            let q = (comp.adjoint() * &p.q * comp)[(0, 0)].re;
            if q != 0.0 {
                acc += self.weight_factor(&p.degrees, y) * q;
            }
        }
        acc
    }
}

/// `model_norm(v, s)` on the punctured polydisk.
pub fn model_norm(metric: &ModelMetric, v: &DVector<Complex64>, s: &[Complex64]) -> Result<f64> {
    if s.len() != metric.variables() {
        return Err(Error::Dimension("point has the wrong number of coordinates".into()));
    }
    let mut y = Vec::with_capacity(s.len());
    for sj in s {
        let r = sj.norm();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidInput("point is outside the punctured polydisk".into()));
        }
        y.push(-libm::log(r) / numeric::TWO_PI);
    }
    Ok(metric.norm_squared_at_heights(v, &y))
}

/// `{ |Re z_j| < a, Im z_j / Im z_{j+1} ≥ ε, Im z_n ≥ ε }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub a: f64,
    pub epsilon: f64,
    pub n: usize,
    /// Samples draw each height ratio log-uniformly from `[ε, ε·span]`.
    pub span: f64,
}

impl Region {
    pub fn new(a: f64, epsilon: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) || !(epsilon > 0.0) || n == 0 {
            return Err(Error::InvalidInput("region needs 0 < a < 1, ε > 0, n ≥ 1".into()));
        }
        Ok(Region {
            a,
            epsilon,
            n,
            span: 100.0,
        })
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        z.len() == self.n
            && z.iter().all(|c| c.re.abs() < self.a)
            && z.windows(2).all(|w| w[0].im / w[1].im >= self.epsilon)
            && z[self.n - 1].im >= self.epsilon
    }
}

/// Seeded points of `region`.
pub fn region_sample(region: &Region, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_span = libm::log(region.span.max(1.0));
    (0..count)
        .map(|_| {
            let mut z = alloc::vec![Complex64::new(0.0, 0.0); region.n];
            let mut below = 1.0;
            for j in (0..region.n).rev() {
                let ratio = region.epsilon * libm::exp(rng.gen::<f64>() * log_span);
                below *= ratio;
                let re = (2.0 * rng.gen::<f64>() - 1.0) * region.a;
                z[j] = Complex64::new(re, below);
            }
            z
        })
        .collect()
}

/// Anything that can measure flat vectors at points of `ℍⁿ`.
pub trait MetricEvaluator {
    /// `|v|²` at `z`, or `None` where the metric is unavailable.
    fn norm_squared(&self, v: &DVector<Complex64>, z: &[Complex64]) -> Option<f64>;
}

impl MetricEvaluator for NilpotentOrbitVHS {
    fn norm_squared(&self, v: &DVector<Complex64>, z: &[Complex64]) -> Option<f64> {
        orbit_hodge_metric(self, z).ok()?.norm_squared(v)
    }
}

impl MetricEvaluator for ModelMetric {
    fn norm_squared(&self, v: &DVector<Complex64>, z: &[Complex64]) -> Option<f64> {
        if z.iter().any(|c| c.im <= 0.0) {
            return None;
        }
        let y: Vec<f64> = z.iter().map(|c| c.im).collect();
        Some(self.norm_squared_at_heights(v, &y))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundednessReport {
    pub min: f64,
    pub max: f64,
    pub evaluated: usize,
    pub excluded: usize,
    pub pass: bool,
}

/// Extremes of `|v|²_true / model_norm(v)` over the sampled points.
pub fn boundedness_ratio(
    truth: &dyn MetricEvaluator,
    model: &ModelMetric,
    region: &Region,
    vectors: &[DVector<Complex64>],
    samples: &[Vec<Complex64>],
) -> BoundednessReport {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut evaluated = 0;
    let mut excluded = 0;
    for z in samples {
        if !region.contains(z) {
            excluded += vectors.len();
            continue;
        }
        let y: Vec<f64> = z.iter().map(|c| c.im).collect();
        for v in vectors {
            let m = model.norm_squared_at_heights(v, &y);
            match truth.norm_squared(v, z) {
                Some(t) if m > 0.0 && t.is_finite() => {
                    let r = t / m;
                    min = min.min(r);
                    max = max.max(r);
                    evaluated += 1;
                }
                _ => excluded += 1,
            }
        }
    }
    BoundednessReport {
        pass: evaluated > 0 && min.is_finite() && max.is_finite() && min > 0.0,
        min,
        max,
        evaluated,
        excluded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ExactMatrix;
    use crate::weight::multi_grading;

    fn e(i: usize, r: usize) -> DVector<Complex64> {
        DVector::from_fn(r, |k, _| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
    }

    fn jordan2() -> ExactMatrix {
        ExactMatrix::from_ints(&[&[0, 1], &[0, 0]])
    }

    #[test]
    fn model_norm_examples() {
        let g = multi_grading(&[jordan2()], &ExactMatrix::identity(2, 1), 0).unwrap();
        let m = ModelMetric::new(g).unwrap();
        let s = [Complex64::new(libm::exp(-numeric::TWO_PI), 0.0)];
        let zero = DVector::from_element(2, Complex64::new(0.0, 0.0));
        assert_eq!(model_norm(&m, &zero, &s).unwrap(), 0.0);
        let pi2 = numeric::TWO_PI;
        assert!((model_norm(&m, &e(1, 2), &s).unwrap() - pi2).abs() < 1e-12);
        let both = e(0, 2) + e(1, 2);
        assert!((model_norm(&m, &both, &s).unwrap() - (pi2 + 1.0 / pi2)).abs() < 1e-12);
    }

    #[test]
    fn samples_respect_region() {
        let r = Region::new(0.5, 1.0, 2).unwrap();
        let pts = region_sample(&r, 200, 7);
        assert!(pts.iter().all(|z| r.contains(z) && z[0].im >= z[1].im && z[1].im >= 1.0));
        assert_eq!(pts, region_sample(&r, 200, 7));
    }
}
