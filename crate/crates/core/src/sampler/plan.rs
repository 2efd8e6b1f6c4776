//! Step-size and iteration-count planners.
//!
//! Both planners pick the largest step size for which the non-asymptotic
//! guarantees hold and the matching iteration count, given the accuracy
//! target and the constants of the potential. The shared variance term is
//! `2σ_F² + 2Ld + C` where `C` aggregates the squared subgradient bounds of
//! the stochastic prox terms.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Convexity regime a plan was made for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Convex,
    StronglyConvex,
}

/// Accuracy metric targeted by the strongly convex planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetMetric {
    /// Squared Wasserstein-2 distance of the final iterate, pushed below ε.
    W2,
    /// KL divergence of the geometrically averaged measure, below α·ε.
    Kl,
}

/// A step size, an iteration budget and the regime they were derived for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan<F> {
    pub gamma: F,
    pub iterations: u64,
    pub regime: Regime,
}

impl<F: Real> StepPlan<F> {
    pub fn new(gamma: F, iterations: u64, regime: Regime) -> Result<Self> {
        if !(gamma > F::zero()) || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("must be positive and finite, got {gamma}"),
            });
        }
        Ok(Self {
            gamma,
            iterations,
            regime,
        })
    }
}

/// Squared-subgradient description of the stochastic prox terms, used to
/// compute the oscillation constant `C`.
#[derive(Debug, Clone)]
pub struct ChainSpec<F> {
    /// Per-term bounds `L_{G_i}` with `E‖∇⁰g_i(x, ξ)‖² ≤ L_{G_i}²`.
    pub term_bounds: Vec<F>,
    /// Whether the terms use independent noise components (each `g_i`
    /// depends on its own independent coordinate of ξ).
    pub independent_noise: bool,
}

/// Oscillation constant `C` of a prox chain.
///
/// `C = L²_{G_1}` for one term, `C = 2(L²_{G_1} + L²_{G_2})` for two, and
/// `C = n·Σᵢ L²_{G_i}` when the terms carry independent noise. For three or
/// more terms with dependent noise no closed form is available and an error
/// is returned.
pub fn compute_c<F: Real>(spec: &ChainSpec<F>) -> Result<F> {
    for (i, b) in spec.term_bounds.iter().enumerate() {
        if !(*b >= F::zero()) || !b.is_finite() {
            return Err(Error::InvalidParameter {
                name: "term_bounds",
                reason: format!("bound {i} must be finite and nonnegative, got {b}"),
            });
        }
    }
    let n = spec.term_bounds.len();
    let sum_sq: F = spec.term_bounds.iter().map(|&b| b * b).sum();
    match n {
        0 => Ok(F::zero()),
        1 => Ok(sum_sq),
        2 => Ok(F::of(2.0) * sum_sq),
        _ if spec.independent_noise => Ok(F::of(n as f64) * sum_sq),
        _ => Err(Error::UnsupportedChain(format!(
            "{n} terms with dependent noise: no closed-form C; \
             declare independent noise or restructure the chain"
        ))),
    }
}

fn check_common<F: Real>(epsilon: F, lipschitz: F, grad_noise: F, c: F, w0_sq: F) -> Result<()> {
    if !(epsilon > F::zero()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must be positive, got {epsilon}"),
        });
    }
    if !(lipschitz >= F::zero()) {
        return Err(Error::InvalidParameter {
            name: "lipschitz",
            reason: format!("must be nonnegative, got {lipschitz}"),
        });
    }
    if !(grad_noise >= F::zero()) {
        return Err(Error::InvalidParameter {
            name: "grad_noise",
            reason: format!("must be nonnegative, got {grad_noise}"),
        });
    }
    if !(c >= F::zero()) {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: format!("must be nonnegative, got {c}"),
        });
    }
    if !(w0_sq >= F::zero()) {
        return Err(Error::InvalidParameter {
            name: "w0_sq",
            reason: format!("must be nonnegative, got {w0_sq}"),
        });
    }
    Ok(())
}

fn variance_term<F: Real>(lipschitz: F, grad_noise: F, dim: usize, c: F) -> F {
    F::of(2.0) * grad_noise * grad_noise + F::of(2.0) * lipschitz * F::of(dim as f64) + c
}

fn ceil_iterations<F: Real>(v: F) -> u64 {
    if v <= F::zero() {
        1
    } else {
        v.ceil().as_f64() as u64
    }
}

/// Plan for the convex regime: guarantees KL of the uniformly averaged
/// measure below `epsilon` after the returned number of iterations.
///
/// `γ = min{1/L, ε/(2σ_F² + 2Ld + C)}` and
/// `iterations ≥ max{L/ε, (2σ_F² + 2Ld + C)/ε²} · W²₀`.
pub fn plan_convex<F: Real>(
    epsilon: F,
    lipschitz: F,
    grad_noise: F,
    dim: usize,
    c: F,
    w0_sq: F,
) -> Result<StepPlan<F>> {
    check_common(epsilon, lipschitz, grad_noise, c, w0_sq)?;
    let v = variance_term(lipschitz, grad_noise, dim, c);
    if v == F::zero() && lipschitz == F::zero() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: "unbounded step size: all smoothness and noise constants are zero".into(),
        });
    }
    let gamma = if lipschitz == F::zero() {
        epsilon / v
    } else if v == F::zero() {
        lipschitz.recip()
    } else {
        (lipschitz.recip()).min(epsilon / v)
    };
    let iterations = ceil_iterations(
        (lipschitz / epsilon).max(v / (epsilon * epsilon)) * w0_sq,
    );
    StepPlan::new(gamma, iterations, Regime::Convex)
}

/// Plan for the strongly convex regime.
///
/// For [`TargetMetric::W2`]: `γ = min{1/L, εα/(2(2σ_F² + 2Ld + C))}` and
/// `iterations ≥ max{L/α, 2(2σ_F² + 2Ld + C)/(εα²)} · log(2W²₀/ε)`, after
/// which the squared Wasserstein-2 distance of the final iterate is below ε.
///
/// For [`TargetMetric::Kl`] the step doubles:
/// `γ = min{1/L, εα/(2σ_F² + 2Ld + C)}` with
/// `iterations ≥ max{L/α, (2σ_F² + 2Ld + C)/(εα²)} · log(2·max{1, W²₀/ε})`,
/// bounding the KL of the geometrically averaged measure by α·ε.
pub fn plan_strongly_convex<F: Real>(
    epsilon: F,
    lipschitz: F,
    alpha: F,
    grad_noise: F,
    dim: usize,
    c: F,
    w0_sq: F,
    target: TargetMetric,
) -> Result<StepPlan<F>> {
    check_common(epsilon, lipschitz, grad_noise, c, w0_sq)?;
    if !(alpha > F::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("must be positive, got {alpha}"),
        });
    }
    if alpha > lipschitz {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("must not exceed the Lipschitz constant ({alpha} > {lipschitz})"),
        });
    }
    let v = variance_term(lipschitz, grad_noise, dim, c);
    let two = F::of(2.0);
    let (gamma_cap, rate, log_arg) = match target {
        TargetMetric::W2 => (
            epsilon * alpha / (two * v),
            (lipschitz / alpha).max(two * v / (epsilon * alpha * alpha)),
            two * w0_sq / epsilon,
        ),
        TargetMetric::Kl => (
            epsilon * alpha / v,
            (lipschitz / alpha).max(v / (epsilon * alpha * alpha)),
            two * (F::one()).max(w0_sq / epsilon),
        ),
    };
    let gamma = if v == F::zero() {
        lipschitz.recip()
    } else {
        lipschitz.recip().min(gamma_cap)
    };
    let iterations = ceil_iterations(rate * log_arg.max(F::one()).ln());
    StepPlan::new(gamma, iterations, Regime::StronglyConvex)
}
