//! Empirical measures and convergence diagnostics.

mod divergence;
mod entropy;
mod trace;
mod wasserstein;

pub use divergence::{
    kl_decomposed, kl_vs_known_density, pinsker_tv_bound, potential_energy_estimate, PinskerBound,
};
pub use entropy::{entropy_estimate, EntropyDetail, EntropyEstimate, EntropyMethod};
pub use trace::{functional_trace, DiagnosticsRecord, DEFAULT_REPLICATES};
pub use wasserstein::{
    wasserstein2_1d, wasserstein2_1d_samples, wasserstein2_empirical, W2Estimate,
    DEFAULT_SLICED_PROJECTIONS,
};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Weighted atomic measure `Σᵢ wᵢ δ_{xᵢ}`.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure<F: Real> {
    points: Vec<Vec<F>>,
    weights: Vec<F>,
    dim: usize,
}

const WEIGHT_TOL: f64 = 1e-12;

impl<F: Real> EmpiricalMeasure<F> {
    /// Uniformly weighted measure on `points`. Skips the normalization
    /// check: weights are 1/n by construction.
    pub fn from_points(points: Vec<Vec<F>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        let dim = Self::check_points(&points)?;
        let w = F::of(1.0 / n as f64);
        Ok(Self {
            points,
            weights: vec![w; n],
            dim,
        })
    }

    /// Uniformly weighted measure on scalar samples.
    pub fn from_scalars(values: &[F]) -> Result<Self> {
        Self::from_points(values.iter().map(|&v| vec![v]).collect())
    }

    /// Measure with explicit weights; they must be nonnegative and sum to 1
    /// within `1e-12`.
    pub fn with_weights(points: Vec<Vec<F>>, weights: Vec<F>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        if weights.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: weights.len(),
            });
        }
        let dim = Self::check_points(&points)?;
        // Kahan summation in f64: a naive pass over 10⁵ f64 weights already
        // drifts past the normalization tolerance.
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for (i, w) in weights.iter().enumerate() {
            if !(*w >= F::zero()) || !w.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "weights",
                    reason: format!("weight {i} must be finite and nonnegative, got {w}"),
                });
            }
            let y = w.as_f64() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::WeightNormalization {
                sum,
                tol: WEIGHT_TOL,
            });
        }
        Ok(Self {
            points,
            weights,
            dim,
        })
    }

    fn check_points(points: &[Vec<F>]) -> Result<usize> {
        let dim = points[0].len();
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if !crate::scalar::all_finite(p) {
                return Err(Error::NonFiniteSample { index: i });
            }
        }
        Ok(dim)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// `true` when every atom has the same weight.
    pub fn is_uniform(&self) -> bool {
        let w0 = self.weights[0].as_f64();
        self.weights
            .iter()
            .all(|w| (w.as_f64() - w0).abs() <= WEIGHT_TOL)
    }

    /// Scalar support values, for one-dimensional measures.
    pub fn scalar_values(&self) -> Result<Vec<F>> {
        if self.dim != 1 {
            return Err(Error::NotOneDimensional { dim: self.dim });
        }
        Ok(self.points.iter().map(|p| p[0]).collect())
    }
}

/// Quantile cloud of `N(mean, sd²)`: the `(i + ½)/n` quantiles, a
/// deterministic stand-in for the analytic Gaussian in transport distances.
pub fn gaussian_quantile_cloud(n: usize, mean: f64, sd: f64) -> Vec<f64> {
    use statrs::distribution::ContinuousCDF;
    let normal = statrs::distribution::Normal::new(mean, sd).expect("valid normal parameters");
    (0..n)
        .map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64))
        .collect()
}

/// Quantile cloud of the standard Laplace law (density `½ e^{−|x|}`).
pub fn laplace_quantile_cloud(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            if u < 0.5 {
                (2.0 * u).ln()
            } else {
                -(2.0 * (1.0 - u)).ln()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn measure_construction_validates_points() {
        assert!(matches!(
            EmpiricalMeasure::<f64>::from_points(vec![]),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(
            EmpiricalMeasure::from_points(vec![vec![1.0], vec![1.0, 2.0]]),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
        assert!(matches!(
            EmpiricalMeasure::from_points(vec![vec![1.0], vec![f64::NAN]]),
            Err(Error::NonFiniteSample { index: 1 })
        ));
        let m = EmpiricalMeasure::from_points(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.dim(), 2);
        assert!(m.is_uniform());
        assert_eq!(m.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn uniform_weights_normalize_at_scale() {
        // 10⁵ identical weights summed naively drift past the tolerance;
        // construction must still succeed.
        let n = 100_000;
        let points: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        assert!(EmpiricalMeasure::from_points(points.clone()).is_ok());
        let weights = vec![1.0 / n as f64; n];
        assert!(EmpiricalMeasure::with_weights(points, weights).is_ok());
    }

    #[test]
    fn explicit_weights_are_checked() {
        let pts = || vec![vec![0.0], vec![1.0]];
        assert!(EmpiricalMeasure::with_weights(pts(), vec![0.25, 0.75]).is_ok());
        assert!(matches!(
            EmpiricalMeasure::with_weights(pts(), vec![1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            EmpiricalMeasure::with_weights(pts(), vec![-0.5, 1.5]),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            EmpiricalMeasure::with_weights(pts(), vec![0.25, 0.25]),
            Err(Error::WeightNormalization { .. })
        ));
        let skewed = EmpiricalMeasure::with_weights(pts(), vec![0.25, 0.75]).unwrap();
        assert!(!skewed.is_uniform());
    }

    #[test]
    fn scalar_values_require_dimension_one() {
        let m = EmpiricalMeasure::from_points(vec![vec![1.0, 2.0]]).unwrap();
        assert!(matches!(
            m.scalar_values(),
            Err(Error::NotOneDimensional { dim: 2 })
        ));
        let m = EmpiricalMeasure::from_scalars(&[3.0, 1.0]).unwrap();
        assert_eq!(m.scalar_values().unwrap(), vec![3.0, 1.0]);
    }

    #[test]
    fn gaussian_cloud_is_symmetric_and_scales() {
        let q = gaussian_quantile_cloud(3, 0.0, 1.0);
        assert_abs_diff_eq!(q[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q[0], -q[2], epsilon = 1e-12);
        let wide = gaussian_quantile_cloud(3, 0.0, 2.0);
        for (a, b) in q.iter().zip(&wide) {
            assert_abs_diff_eq!(2.0 * a, *b, epsilon = 1e-12);
        }
        let shifted = gaussian_quantile_cloud(3, 1.0, 1.0);
        for (a, b) in q.iter().zip(&shifted) {
            assert_abs_diff_eq!(a + 1.0, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn laplace_cloud_matches_the_analytic_quantiles() {
        let q = laplace_quantile_cloud(3);
        assert_abs_diff_eq!(q[0], -(3f64.ln()), epsilon = 1e-12);
        assert_abs_diff_eq!(q[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q[2], 3f64.ln(), epsilon = 1e-12);
        // First two moments of the standard Laplace law: E|X| = 1, EX² = 2.
        let big = laplace_quantile_cloud(100_000);
        let n = big.len() as f64;
        let mean_abs = big.iter().map(|v| v.abs()).sum::<f64>() / n;
        let mean_sq = big.iter().map(|v| v * v).sum::<f64>() / n;
        assert_abs_diff_eq!(mean_abs, 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(mean_sq, 2.0, epsilon = 1e-2);
    }
}
