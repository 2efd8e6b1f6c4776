//! Index samplers that turn a trajectory into a draw from an averaged
//! measure.
//!
//! Feed these a generator of their own: mixing index draws into a chain's
//! generator would change its trajectory.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform index over `{0, …, k}`; pairs with the per-step `y₀` samples in
/// the convex regime.
pub fn uniform_index<R: Rng + ?Sized>(k: u64, rng: &mut R) -> u64 {
    rng.random_range(0..=k)
}

/// Geometric index over `{0, …, k}` with `P(j = r) ∝ (1 − γα)^(−r)`; pairs
/// with the iterates in the strongly convex regime. Late indices carry
/// almost all the mass.
///
/// Sampled by inverse CDF from the top: with `q = 1 − γα`, the offset
/// `m = k − j` is geometric with ratio `q` truncated at `k`, so
/// `m = ⌈ln(1 − u(1 − q^{k+1}))/ln q⌉ − 1` for uniform `u`. Everything is
/// computed in logs; no weight table is materialized.
pub fn geometric_index<F: Real, R: Rng + ?Sized>(
    k: u64,
    gamma: F,
    alpha: F,
    rng: &mut R,
) -> Result<u64> {
    let ga = (gamma * alpha).as_f64();
    if !(0.0 < ga && ga < 1.0) {
        return Err(Error::InvalidParameter {
            name: "gamma * alpha",
            reason: format!("must lie in (0, 1), got {ga}"),
        });
    }
    let ln_q = (-ga).ln_1p();
    // 1 − q^{k+1}, exact even when q^{k+1} underflows.
    let tail = -f64::exp_m1((k as f64 + 1.0) * ln_q);
    let u: f64 = F::draw_standard_uniform(rng).as_f64();
    let t = f64::ln_1p(-u * tail);
    let m = (t / ln_q).ceil() - 1.0;
    let m = if m.is_finite() && m > 0.0 { m as u64 } else { 0 };
    Ok(k - m.min(k))
}

/// Analytic mass `P(j = r)` of the geometric index, for tests and reporting.
pub fn geometric_index_weight(k: u64, r: u64, gamma_alpha: f64) -> f64 {
    let ln_q = (-gamma_alpha).ln_1p();
    let tail = -f64::exp_m1((k as f64 + 1.0) * ln_q);
    ((k - r) as f64 * ln_q).exp() * (-f64::exp_m1(ln_q)) / tail
}
