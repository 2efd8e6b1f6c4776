//! Proximal building blocks.
//!
//! A composite potential carries a list of nonsmooth terms that are handled
//! through their proximity operators rather than through (sub)gradients.
//! This module defines the contract such a term must satisfy
//! ([`ProxFunction`]), a catalogue of closed-form instances, ordered chains
//! of terms ([`ProxChain`]), the Moreau envelope and Yosida approximation,
//! and a derivative-free numerical oracle used to cross-check every
//! closed-form prox in the test suite.

mod catalogue;
mod oracle;

pub use catalogue::{Abs, EdgeDiff, Quadratic, ShiftedAbs, Zero};
pub use oracle::numerical_prox_oracle;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{all_finite, sign, squared_distance, Real};

/// A convex function accessed through its value, proximity operator and
/// minimal-section subgradient.
///
/// `prox` is the exact minimizer of `u ↦ ½‖u − x‖² + γ g(u)`; implementations
/// must be closed-form (the numerical oracle exists precisely to verify
/// them). `min_subgradient` returns the least-norm element of `∂g(x)`, the
/// quantity subgradient-based baselines step along.
pub trait ProxFunction<F: Real>: Send + Sync {
    /// `g(x)`.
    fn eval(&self, x: &[F]) -> F;

    /// Overwrites `x` with `prox_{γ g}(x)`.
    fn prox_in_place(&self, x: &mut [F], gamma: F) -> Result<()>;

    /// `prox_{γ g}(x)` into a fresh vector.
    fn prox(&self, x: &[F], gamma: F) -> Result<Vec<F>> {
        let mut out = x.to_vec();
        self.prox_in_place(&mut out, gamma)?;
        Ok(out)
    }

    /// Adds the least-norm subgradient `∇⁰g(x)` onto `out`.
    fn accumulate_min_subgradient(&self, x: &[F], out: &mut [F]);

    /// Least-norm subgradient `∇⁰g(x)`.
    fn min_subgradient(&self, x: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); x.len()];
        self.accumulate_min_subgradient(x, &mut out);
        out
    }

    /// `sup_x ‖∇⁰g(x)‖` when finite, `None` otherwise.
    fn lipschitz_bound(&self) -> Option<F>;
}

/// Scalar soft-thresholding: `sign(y) · max(|y| − t, 0)`, with `sign(0) = 0`.
///
/// This is `prox_{t|·|}(y)`. Requires `t ≥ 0`.
pub fn soft_threshold<F: Real>(y: F, t: F) -> F {
    debug_assert!(t >= F::zero());
    sign(y) * (y.abs() - t).max(F::zero())
}

/// Prox of the shifted absolute value `u ↦ |u| + u·s` with weight `γ`:
/// completing the square gives `soft_threshold(y − γs, γ)`.
pub fn prox_abs_shifted<F: Real>(y: F, gamma: F, s: F) -> F {
    debug_assert!(gamma >= F::zero());
    soft_threshold(y - gamma * s, gamma)
}

/// Prox of `u ↦ t·|u(v) − u(w)|` applied in place: both endpoints move toward
/// each other by `min(t, |u(v) − u(w)| / 2)`, every other coordinate is
/// untouched.
pub fn edge_prox_in_place<F: Real>(x: &mut [F], v: usize, w: usize, t: F) -> Result<()> {
    if v == w {
        return Err(Error::DegenerateEdge(v));
    }
    let dim = x.len();
    for idx in [v, w] {
        if idx >= dim {
            return Err(Error::IndexOutOfRange { index: idx, dim });
        }
    }
    debug_assert!(t >= F::zero());
    let d = x[v] - x[w];
    let delta = t.min(d.abs() / F::of(2.0)) * sign(d);
    x[v] = x[v] - delta;
    x[w] = x[w] + delta;
    Ok(())
}

/// Prox of the two-coordinate edge term, returning a fresh vector.
pub fn edge_prox<F: Real>(x: &[F], v: usize, w: usize, t: F) -> Result<Vec<F>> {
    let mut out = x.to_vec();
    edge_prox_in_place(&mut out, v, w, t)?;
    Ok(out)
}

/// Moreau envelope `g^γ(x) = min_u { ‖u − x‖²/(2γ) + g(u) }`, evaluated
/// through the prox.
pub fn moreau_envelope<F: Real>(g: &dyn ProxFunction<F>, x: &[F], gamma: F) -> Result<F> {
    let p = g.prox(x, gamma)?;
    Ok(squared_distance(&p, x) / (F::of(2.0) * gamma) + g.eval(&p))
}

/// Yosida approximation `∇g^γ(x) = (x − prox_{γ g}(x)) / γ`.
pub fn yosida<F: Real>(g: &dyn ProxFunction<F>, x: &[F], gamma: F) -> Result<Vec<F>> {
    let p = g.prox(x, gamma)?;
    Ok(x.iter().zip(&p).map(|(&xi, &pi)| (xi - pi) / gamma).collect())
}

/// An ordered list of prox terms applied sequentially with a shared weight.
#[derive(Clone)]
pub struct ProxChain<F: Real> {
    terms: Vec<Arc<dyn ProxFunction<F>>>,
}

impl<F: Real> ProxChain<F> {
    pub fn new(terms: Vec<Arc<dyn ProxFunction<F>>>) -> Self {
        Self { terms }
    }

    pub fn empty() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn push(&mut self, term: Arc<dyn ProxFunction<F>>) {
        self.terms.push(term);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Arc<dyn ProxFunction<F>>] {
        &self.terms
    }

    /// Sequential pass `y_i = prox_{γ g_i}(y_{i−1})`, recording every
    /// intermediate. Returns `(y_n, [y_1, …, y_n])`.
    pub fn apply(&self, y0: &[F], gamma: F) -> Result<(Vec<F>, Vec<Vec<F>>)> {
        let mut y = y0.to_vec();
        let mut intermediates = Vec::with_capacity(self.terms.len());
        for (i, term) in self.terms.iter().enumerate() {
            term.prox_in_place(&mut y, gamma)?;
            if !all_finite(&y) {
                return Err(Error::NonFiniteIntermediate { term: i });
            }
            intermediates.push(y.clone());
        }
        Ok((y, intermediates))
    }

    /// Sequential pass without recording intermediates; used in hot loops.
    pub fn apply_in_place(&self, y: &mut [F], gamma: F) -> Result<()> {
        for (i, term) in self.terms.iter().enumerate() {
            term.prox_in_place(y, gamma)?;
            if !all_finite(y) {
                return Err(Error::NonFiniteIntermediate { term: i });
            }
        }
        Ok(())
    }

    /// `Σ_i g_i(x)`.
    pub fn eval_sum(&self, x: &[F]) -> F {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Adds `Σ_i ∇⁰g_i(x)` onto `out`.
    pub fn accumulate_min_subgradients(&self, x: &[F], out: &mut [F]) {
        for term in &self.terms {
            term.accumulate_min_subgradient(x, out);
        }
    }
}
