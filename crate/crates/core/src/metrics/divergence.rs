//! KL-divergence estimation against a known target density, and the Pinsker
//! bound that converts it into a total-variation bound.
//!
//! For a target `ν ∝ exp(−U)` with known normalizing constant the divergence
//! of the sample law `μ` splits as `KL(μ|ν) = −Ĥ(μ) − E_μ[ln ν]`, where `Ĥ`
//! is differential entropy. When only the potential `U` is known up to a
//! constant, the decomposed form compares energy and entropy against the
//! target's own values: `KL = (Ê_U − Ĥ) − (E*_U − H*)`.

use crate::error::{Error, Result};
use crate::metrics::entropy::{entropy_estimate, EntropyEstimate, EntropyMethod};
use crate::metrics::EmpiricalMeasure;
use crate::scalar::Real;

/// Weighted mean of `U` over the measure's points.
pub fn potential_energy_estimate<F: Real>(
    measure: &EmpiricalMeasure<F>,
    potential: impl Fn(&[F]) -> F,
) -> Result<F> {
    let mut acc = F::zero();
    for (index, (p, &w)) in measure.points().iter().zip(measure.weights()).enumerate() {
        let u = potential(p);
        if !u.is_finite() {
            return Err(Error::NonFinitePotential { index });
        }
        acc = acc + w * u;
    }
    Ok(acc)
}

/// `KL(μ̂|ν) ≈ −Ĥ − (1/N) Σ ln ν(xᵢ)` for a fully normalized scalar density.
///
/// Returns the divergence together with the entropy estimate that entered it.
pub fn kl_vs_known_density<F: Real>(
    samples: &[F],
    log_density: impl Fn(F) -> F,
    method: EntropyMethod<F>,
) -> Result<(F, EntropyEstimate<F>)> {
    let entropy = entropy_estimate(samples, method)?;
    let n = F::of(samples.len() as f64);
    let mean_log = samples.iter().map(|&s| log_density(s)).sum::<F>() / n;
    Ok((-entropy.value - mean_log, entropy))
}

/// Decomposed scalar KL estimate against a target known only through its
/// potential: `(Ê_U − Ĥ) − (E*_U − H*)`. The caller supplies the target's
/// exact mean potential energy and differential entropy.
pub fn kl_decomposed<F: Real>(
    samples: &[F],
    potential: impl Fn(F) -> F,
    target_energy: F,
    target_entropy: F,
    method: EntropyMethod<F>,
) -> Result<(F, EntropyEstimate<F>)> {
    let entropy = entropy_estimate(samples, method)?;
    let n = F::of(samples.len() as f64);
    let energy = samples.iter().map(|&s| potential(s)).sum::<F>() / n;
    let kl = (energy - entropy.value) - (target_energy - target_entropy);
    Ok((kl, entropy))
}

/// Total-variation bound from Pinsker's inequality, `TV ≤ √(KL/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinskerBound<F> {
    pub bound: F,
    /// True when the KL input was negative (estimator noise) and was clamped
    /// to zero before the square root.
    pub clamped: bool,
}

pub fn pinsker_tv_bound<F: Real>(kl: F) -> Result<PinskerBound<F>> {
    if !kl.is_finite() {
        return Err(Error::InvalidParameter {
            name: "kl",
            reason: "must be finite".into(),
        });
    }
    let clamped = kl < F::zero();
    let val = if clamped { F::zero() } else { kl };
    Ok(PinskerBound {
        bound: (val / F::of(2.0)).sqrt(),
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const LN_2PI_E: f64 = 2.837877066409345;

    fn gaussian_samples(n: usize, mean: f64, sd: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| mean + sd * f64::draw_standard_normal(&mut rng))
            .collect()
    }

    #[test]
    fn potential_energy_is_the_weighted_mean() {
        let m = EmpiricalMeasure::from_scalars(&[-1.0, 1.0]).unwrap();
        assert_eq!(potential_energy_estimate(&m, |_| 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            potential_energy_estimate(&m, |p| p[0] * p[0] / 2.0).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        let skewed =
            EmpiricalMeasure::with_weights(vec![vec![0.0], vec![2.0]], vec![0.25, 0.75]).unwrap();
        assert_abs_diff_eq!(
            potential_energy_estimate(&skewed, |p| p[0]).unwrap(),
            1.5,
            epsilon = 1e-15
        );
        assert!(matches!(
            potential_energy_estimate(&m, |p: &[f64]| (p[0] - 1.0).ln()),
            Err(Error::NonFinitePotential { index: 0 })
        ));
    }

    #[test]
    fn mean_absolute_value_of_the_laplace_law() {
        let cloud = crate::metrics::laplace_quantile_cloud(100_000);
        let m = EmpiricalMeasure::from_scalars(&cloud).unwrap();
        let e = potential_energy_estimate(&m, |p| p[0].abs()).unwrap();
        assert!((e - 1.0).abs() < 0.02, "E|X| = {e}");
    }

    #[test]
    fn self_divergence_vanishes() {
        let samples = gaussian_samples(100_000, 0.0, 1.0, 41);
        let log_density = |x: f64| -0.5 * x * x - 0.5 * (2.0 * std::f64::consts::PI).ln();
        let (kl, est) =
            kl_vs_known_density(&samples, log_density, EntropyMethod::default()).unwrap();
        assert!(kl.abs() < 0.05, "self KL = {kl}");
        assert!(est.value > 1.0);
    }

    #[test]
    fn divergence_between_shifted_gaussians() {
        // KL(N(0,1) ‖ N(1,1)) = ½.
        let samples = gaussian_samples(100_000, 0.0, 1.0, 42);
        let log_density =
            |x: f64| -0.5 * (x - 1.0) * (x - 1.0) - 0.5 * (2.0 * std::f64::consts::PI).ln();
        let (kl, _) =
            kl_vs_known_density(&samples, log_density, EntropyMethod::default()).unwrap();
        assert!((kl - 0.5).abs() < 0.05, "KL = {kl}");
    }

    #[test]
    fn divergence_between_scaled_gaussians() {
        // KL(N(0,4) ‖ N(0,1)) = ½(4 − 1 − ln 4) ≈ 0.8069.
        let samples = gaussian_samples(100_000, 0.0, 2.0, 43);
        let log_density = |x: f64| -0.5 * x * x - 0.5 * (2.0 * std::f64::consts::PI).ln();
        let (kl, _) =
            kl_vs_known_density(&samples, log_density, EntropyMethod::default()).unwrap();
        let analytic = 0.5 * (4.0 - 1.0 - 4f64.ln());
        assert!((kl - analytic).abs() < 0.05, "KL = {kl} vs {analytic}");
    }

    #[test]
    fn decomposed_form_agrees_with_the_direct_one() {
        let samples = gaussian_samples(100_000, 0.0, 2.0, 44);
        let log_density = |x: f64| -0.5 * x * x - 0.5 * (2.0 * std::f64::consts::PI).ln();
        let (direct, _) =
            kl_vs_known_density(&samples, log_density, EntropyMethod::default()).unwrap();
        // Against N(0,1): E*[½x²] = ½ and H* = ½ln(2πe).
        let (decomposed, _) = kl_decomposed(
            &samples,
            |x| 0.5 * x * x,
            0.5,
            0.5 * LN_2PI_E,
            EntropyMethod::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(direct, decomposed, epsilon = 1e-9);
    }

    #[test]
    fn pinsker_bound_follows_the_formula() {
        assert_eq!(pinsker_tv_bound(0.0).unwrap().bound, 0.0);
        assert_eq!(pinsker_tv_bound(2.0).unwrap().bound, 1.0);
        assert_abs_diff_eq!(pinsker_tv_bound(0.5).unwrap().bound, 0.5, epsilon = 1e-15);
        let clamped = pinsker_tv_bound(-0.03).unwrap();
        assert!(clamped.clamped);
        assert_eq!(clamped.bound, 0.0);
        assert!(!pinsker_tv_bound(2.0).unwrap().clamped);
        assert!(pinsker_tv_bound(f64::NAN).is_err());
    }
}
