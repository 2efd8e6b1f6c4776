//! Derivative-free numerical prox solver used as a test oracle.
//!
//! Independent of every closed-form prox in the catalogue: it only evaluates
//! the function. Closed forms are trusted because they agree with this
//! routine, never the other way around.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hard cap on the dimension the oracle accepts. Work grows like `3^d` per
/// sweep; 4 is enough for every cross-check in the suite (the largest is the
/// total-variation prox on a 2×2 grid).
pub const ORACLE_MAX_DIM: usize = 4;

const TERNARY_STEPS: usize = 120;
const MAX_SWEEPS: usize = 600;

/// Minimizes `u ↦ ½‖u − x‖² + γ g(u)` for a convex `g` given only through
/// its values, to within `tol` in every coordinate.
///
/// The search box is `x ± 10γ(1 + s)` where `s` is a finite-difference bound
/// on `‖∇⁰g(x)‖`; the true minimizer lies within `γ‖∇⁰g(x)‖` of `x`, so the
/// box always contains it. Inside the box the routine runs cyclic exact line
/// searches (ternary, the sections are convex) over every sign-pattern
/// direction in `{−1, 0, 1}^d`. Coordinate directions alone are not enough:
/// on a coupled kink such as `t·|u₁ − u₂|` they stall at non-minimizers,
/// while a descent direction always exists inside the sign-pattern set
/// because any direction is a positive combination of sign patterns and the
/// directional derivative is subadditive.
pub fn numerical_prox_oracle<F, G>(g: G, x: &[F], gamma: F, tol: F) -> Result<Vec<F>>
where
    F: Real,
    G: Fn(&[F]) -> F,
{
    let d = x.len();
    if d == 0 || d > ORACLE_MAX_DIM {
        return Err(Error::OracleDimension {
            max: ORACLE_MAX_DIM,
            got: d,
        });
    }
    if !(gamma > F::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: format!("must be positive, got {gamma}"),
        });
    }
    if !(tol > F::zero()) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }

    let objective = |u: &[F]| {
        let mut q = F::zero();
        for (ui, xi) in u.iter().zip(x) {
            q = q + (*ui - *xi) * (*ui - *xi);
        }
        q / (F::of(2.0) * gamma) + g(u)
    };

    let radius = F::of(10.0) * gamma * (F::one() + slope_bound(&g, x));
    let directions = sign_patterns(d);
    let span = radius * F::of(d as f64).sqrt();

    let mut u = x.to_vec();
    let mut best = objective(&u);
    let mut scratch = vec![F::zero(); d];
    let stop = tol / F::of(10.0);
    let mut movement = F::zero();

    for _sweep in 0..MAX_SWEEPS {
        movement = F::zero();
        for dir in &directions {
            let norm = F::of(dir.iter().map(|&c| f64::from(c * c)).sum::<f64>()).sqrt();
            let step = line_minimum(
                |s| {
                    for i in 0..d {
                        scratch[i] = u[i] + s * F::of(f64::from(dir[i]));
                    }
                    objective(&scratch)
                },
                -span,
                span,
            );
            for i in 0..d {
                scratch[i] = u[i] + step * F::of(f64::from(dir[i]));
            }
            // Only strict improvements are kept; at the resolution floor no
            // candidate improves, every sweep accepts nothing and we stop
            // instead of oscillating.
            let candidate = objective(&scratch);
            if candidate < best {
                best = candidate;
                u.copy_from_slice(&scratch);
                movement = movement.max(step.abs() * norm);
            }
        }
        if movement <= stop {
            return Ok(u);
        }
    }

    Err(Error::OracleNoConvergence {
        cycles: MAX_SWEEPS,
        movement: movement.as_f64(),
    })
}

/// Finite-difference upper bound on `‖∇⁰g(x)‖`: for convex `g` the one-sided
/// slopes through `x` bracket every subgradient component.
fn slope_bound<F: Real, G: Fn(&[F]) -> F>(g: &G, x: &[F]) -> F {
    let gx = g(x);
    let mut probe = x.to_vec();
    let mut sum = F::zero();
    for i in 0..x.len() {
        let delta = F::of(1e-4) * (F::one() + x[i].abs());
        probe[i] = x[i] + delta;
        let up = ((g(&probe) - gx) / delta).abs();
        probe[i] = x[i] - delta;
        let down = ((g(&probe) - gx) / delta).abs();
        probe[i] = x[i];
        let s = up.max(down);
        sum = sum + s * s;
    }
    sum.sqrt()
}

/// Ternary search for the minimum of a convex section on `[lo, hi]`.
fn line_minimum<F: Real>(mut phi: impl FnMut(F) -> F, mut lo: F, mut hi: F) -> F {
    let third = F::of(3.0);
    for _ in 0..TERNARY_STEPS {
        let width = (hi - lo) / third;
        let m1 = lo + width;
        let m2 = hi - width;
        if phi(m1) < phi(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo + hi) / F::of(2.0)
}

/// All nonzero directions in `{−1, 0, 1}^d`, one per antipodal pair (the
/// line search covers both signs).
fn sign_patterns(d: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    let mut current = vec![0i8; d];
    fill_patterns(d, 0, &mut current, &mut out);
    out
}

fn fill_patterns(d: usize, i: usize, current: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
    if i == d {
        if current.iter().any(|&c| c != 0) {
            out.push(current.clone());
        }
        return;
    }
    let choices: &[i8] = if current.iter().take(i).all(|&c| c == 0) {
        // Canonical representative: first nonzero component is +1.
        &[0, 1]
    } else {
        &[0, 1, -1]
    };
    for &c in choices {
        current[i] = c;
        fill_patterns(d, i + 1, current, out);
    }
    current[i] = 0;
}
