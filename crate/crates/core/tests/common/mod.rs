//! Experiment potentials shared by the integration suites.

#![allow(dead_code)]

use std::sync::Arc;

use splangevin::prox::{ProxChain, ShiftedAbs};
use splangevin::sampler::{
    run, Algorithm, CompositePotential, SampleTag, Schedule, SmoothConstants, StepPlan,
    StoreConfig,
};
use splangevin::Real;

/// `U ≡ 0`, no prox terms: the iterates are a discretized Brownian motion,
/// `x^k ~ N(x^0, 2γk·I)` exactly.
pub fn pure_diffusion(dim: usize) -> CompositePotential<f64, ()> {
    CompositePotential::new(
        dim,
        SmoothConstants::new(0.0, 0.0, 0.0).unwrap(),
        |_x: &[f64], _xi: &(), out: &mut [f64]| out.fill(0.0),
        |_xi: &()| ProxChain::empty(),
        |_rng| (),
    )
}

/// `U(x) = ½‖x‖²` with exact gradient: the target is `N(0, I)` and
/// `L = α = 1`.
pub fn standard_gaussian(dim: usize) -> CompositePotential<f64, ()> {
    CompositePotential::new(
        dim,
        SmoothConstants::new(1.0, 1.0, 0.0).unwrap(),
        |x: &[f64], _xi: &(), out: &mut [f64]| out.copy_from_slice(x),
        |_xi: &()| ProxChain::empty(),
        |_rng| (),
    )
    .with_full_value(|x| 0.5 * x.iter().map(|c| c * c).sum::<f64>())
}

/// Laplace toy target `π(x) ∝ e^{−|x|}` in one dimension, written as the
/// expectation of the stochastic term `g(x, ξ) = |x| + ξx` over standard
/// Gaussian `ξ`. The smooth part vanishes; every potential call draws one
/// fresh `ξ` and proxes a single shifted absolute value.
pub fn laplace_toy() -> CompositePotential<f64, f64> {
    CompositePotential::new(
        1,
        SmoothConstants::new(0.0, 0.0, 0.0).unwrap(),
        |_x: &[f64], _xi: &f64, out: &mut [f64]| out.fill(0.0),
        |xi: &f64| ProxChain::new(vec![Arc::new(ShiftedAbs::scalar(*xi))]),
        |rng| f64::draw_standard_normal(rng),
    )
    .with_full_value(|x| x[0].abs())
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Runs `n` independent scalar chains with seeds `seed_base..seed_base + n`
/// and gathers the recorded `x` iterates per checkpoint slot, in chain
/// order. Returns the shared checkpoint list and one point cloud per slot.
pub fn parallel_clouds(
    algorithm: Algorithm,
    pot: &CompositePotential<f64, impl Clone>,
    x0: f64,
    plan: &StepPlan<f64>,
    stride: u64,
    n: usize,
    seed_base: u64,
) -> (Vec<u64>, Vec<Vec<f64>>) {
    let cfg = StoreConfig {
        record_x: true,
        record_y0: false,
        schedule: Schedule::Every(stride),
    };
    let mut checkpoints: Vec<u64> = Vec::new();
    let mut clouds: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let store = run(
            algorithm,
            pot,
            vec![x0],
            plan,
            seed_base + i as u64,
            &cfg,
            None,
        )
        .unwrap();
        if i == 0 {
            checkpoints = store.iterations(SampleTag::X).collect();
            clouds = vec![Vec::with_capacity(n); checkpoints.len()];
        }
        for (slot, rec) in store.with_tag(SampleTag::X).enumerate() {
            clouds[slot].push(rec.point[0]);
        }
    }
    (checkpoints, clouds)
}
