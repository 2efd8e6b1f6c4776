//! Exact prox of `t·TV(·, g)` by projected gradient ascent on the dual.
//!
//! With `D` the signed edge-incidence operator, the prox
//! `argmin_u t·TV(u) + ½‖u − x‖²` equals `x − Dᵀp*` where `p*` maximizes
//! `−½‖x − Dᵀp‖²` over the box `[−t, t]^E`. The ascent step `1/(2·Δmax)` is
//! safe since `λmax(DDᵀ) ≤ 2·Δmax` by Gershgorin (each dual row couples an
//! edge to the edges sharing its endpoints).

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;

/// Cold-started exact TV prox; see [`full_tv_prox_dual_warm`].
pub fn full_tv_prox_dual<F: Real>(
    x: &[F],
    g: &Graph,
    t: F,
    max_iters: usize,
    tol: F,
) -> Result<Vec<F>> {
    let mut p = vec![F::zero(); g.num_edges()];
    full_tv_prox_dual_warm(x, g, t, max_iters, tol, &mut p)
}

/// Exact TV prox continuing from the dual iterate in `p` (all zeros for a
/// cold start). `p` is left at the final dual point so a caller may (at its
/// own choice of reproducibility trade-off) warm-start the next call.
/// Stops when the sup-norm primal change of one sweep drops to `tol`.
pub fn full_tv_prox_dual_warm<F: Real>(
    x: &[F],
    g: &Graph,
    t: F,
    max_iters: usize,
    tol: F,
    p: &mut [F],
) -> Result<Vec<F>> {
    if !(t > F::zero()) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("prox weight must be positive and finite, got {t}"),
        });
    }
    if !(tol > F::zero()) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    if x.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            got: x.len(),
        });
    }
    if p.len() != g.num_edges() {
        return Err(Error::DimensionMismatch {
            expected: g.num_edges(),
            got: p.len(),
        });
    }
    if g.num_edges() == 0 {
        return Ok(x.to_vec());
    }

    let edges = g.edges();
    let step = F::of(1.0 / (2.0 * g.max_degree() as f64));
    let mut u = primal(x, edges, p);
    let mut residual = F::infinity();
    for _ in 0..max_iters {
        for (pe, &(v, w)) in p.iter_mut().zip(edges) {
            let grad = u[v as usize] - u[w as usize];
            *pe = (*pe + step * grad).max(-t).min(t);
        }
        let next = primal(x, edges, p);
        residual = u
            .iter()
            .zip(&next)
            .map(|(&a, &b)| (a - b).abs())
            .fold(F::zero(), F::max);
        u = next;
        if residual <= tol {
            return Ok(u);
        }
    }
    Err(Error::DualProxNoConvergence {
        iters: max_iters,
        residual: residual.as_f64(),
        last: u.iter().map(|v| v.as_f64()).collect(),
    })
}

/// `u = x − Dᵀp`.
fn primal<F: Real>(x: &[F], edges: &[(u32, u32)], p: &[F]) -> Vec<F> {
    let mut u = x.to_vec();
    for (&pe, &(v, w)) in p.iter().zip(edges) {
        u[v as usize] = u[v as usize] - pe;
        u[w as usize] = u[w as usize] + pe;
    }
    u
}
