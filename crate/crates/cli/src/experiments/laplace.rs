//! Laplace toy target `π(x) ∝ e^{−|x|}`, written as the expectation of the
//! stochastic term `g(x, ξ) = |x| + ξx` over standard Gaussian `ξ`. Emits a
//! per-checkpoint diagnostics trace and a final histogram per algorithm.

use std::f64::consts::LN_2;
use std::sync::Arc;

use rayon::prelude::*;
use splangevin::metrics::{
    functional_trace, kl_vs_known_density, pinsker_tv_bound, EntropyMethod,
};
use splangevin::prox::{soft_threshold, ProxChain, ShiftedAbs};
use splangevin::sampler::{
    run, Algorithm, CompositePotential, FullProx, Regime, SampleStore, SampleTag, Schedule,
    StepPlan, StoreConfig,
};
use splangevin::Real;

use crate::config::{write_manifest, Resolved};
use crate::csvio;
use crate::errors::CliResult;
use crate::experiments::{chain_seed, check_abort, numerical};

/// Record every iteration while chains·iters stays below this; past it, fall
/// back to the checkpoint cadence to keep memory flat.
const DENSE_RECORD_LIMIT: u64 = 2_000_000;

const HISTOGRAM_BINS: usize = 200;

fn potential() -> CompositePotential<f64, f64> {
    CompositePotential::new(
        1,
        splangevin::sampler::SmoothConstants::new(0.0, 0.0, 0.0).expect("constants are valid"),
        |_x: &[f64], _xi: &f64, out: &mut [f64]| out.fill(0.0),
        |xi: &f64| ProxChain::new(vec![Arc::new(ShiftedAbs::scalar(*xi))]),
        |rng| f64::draw_standard_normal(rng),
    )
    .with_full_value(|x| x[0].abs())
}

pub fn run_experiment(cfg: &Resolved) -> CliResult<()> {
    write_manifest(&cfg.out, &cfg.manifest_common())?;

    let cadence = Schedule::GeometricWithTail {
        tail_stride: cfg.tail_stride,
    };
    let dense = (cfg.chains as u64).saturating_mul(cfg.iters) <= DENSE_RECORD_LIMIT;
    let store_cfg = StoreConfig {
        record_x: true,
        record_y0: true,
        schedule: if dense { Schedule::Every(1) } else { cadence },
    };
    let pot = potential();
    let plan = StepPlan::new(cfg.gamma, cfg.iters, Regime::Convex).expect("gamma validated");

    for &algo in &cfg.algos {
        let full_prox: Option<Box<FullProx<f64>>> = match algo {
            Algorithm::ProxLa => Some(Box::new(|x: &[f64], g: f64| {
                Ok(x.iter().map(|&v| soft_threshold(v, g)).collect())
            })),
            _ => None,
        };
        let stores: Vec<SampleStore<f64>> = (0..cfg.chains)
            .into_par_iter()
            .map(|i| {
                run(
                    algo,
                    &pot,
                    vec![0.0],
                    &plan,
                    chain_seed(cfg.seed, i),
                    &store_cfg,
                    full_prox.as_deref(),
                )
            })
            .collect::<splangevin::Result<_>>()
            .map_err(numerical)?;
        for (i, store) in stores.iter().enumerate() {
            check_abort(algo, i, store)?;
        }
        write_trace(cfg, algo, &stores, cadence)?;
        write_histogram(cfg, algo, &stores)?;
    }
    Ok(())
}

/// Per-checkpoint cross-section diagnostics over the replicate chains, plus
/// the KL of the running `y₀` pool (the averaged measure) against the target.
fn write_trace(
    cfg: &Resolved,
    algo: Algorithm,
    stores: &[SampleStore<f64>],
    cadence: Schedule,
) -> CliResult<()> {
    let filtered: Vec<SampleStore<f64>> = stores
        .iter()
        .map(|s| {
            let mut kept = SampleStore::new(1);
            for r in s.with_tag(SampleTag::X) {
                if cadence.records(r.k) {
                    kept.push(r.k, SampleTag::X, r.point.clone());
                }
            }
            kept
        })
        .collect();
    let trace = functional_trace(&filtered, |x: &[f64]| x[0].abs(), filtered.len())
        .map_err(numerical)?;

    let mut pooled: Vec<(u64, f64)> = stores
        .iter()
        .flat_map(|s| s.with_tag(SampleTag::Y0).map(|r| (r.k, r.point[0])))
        .collect();
    pooled.sort_by_key(|&(k, _)| k);
    let pool_ks: Vec<u64> = pooled.iter().map(|&(k, _)| k).collect();
    let pool_vals: Vec<f64> = pooled.iter().map(|&(_, v)| v).collect();

    let mut csv = csvio::create(
        &cfg.out,
        &format!("laplace_trace_{algo}.csv"),
        "laplace_trace v1",
        "iteration,entropy,energy,functional,kl,pinsker_tv",
    )?;
    for rec in &trace {
        let end = pool_ks.partition_point(|&k| k <= rec.k);
        let (kl, tv) = match kl_vs_known_density(
            &pool_vals[..end],
            |x: f64| -x.abs() - LN_2,
            EntropyMethod::default(),
        ) {
            Ok((kl, _)) => {
                let tv = pinsker_tv_bound(kl).map(|b| b.bound).unwrap_or(f64::NAN);
                (kl, tv)
            }
            Err(_) => (f64::NAN, f64::NAN),
        };
        csv.row(&format!(
            "{},{},{},{},{},{}",
            rec.k, rec.entropy, rec.potential_energy, rec.functional, kl, tv
        ))?;
    }
    csv.finish()
}

/// Histogram of all recorded iterates past the start, or of `x⁰` alone when
/// the run had no iterations.
fn write_histogram(cfg: &Resolved, algo: Algorithm, stores: &[SampleStore<f64>]) -> CliResult<()> {
    let pool = |from_k: u64| -> Vec<f64> {
        stores
            .iter()
            .flat_map(|s| {
                s.with_tag(SampleTag::X)
                    .filter(move |r| r.k >= from_k)
                    .map(|r| r.point[0])
            })
            .collect()
    };
    let mut samples = pool(1);
    if samples.is_empty() {
        samples = pool(0);
    }
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let width = (hi - lo) / HISTOGRAM_BINS as f64;

    let mut counts = vec![0u64; HISTOGRAM_BINS];
    for &v in &samples {
        let idx = (((v - lo) / width) as usize).min(HISTOGRAM_BINS - 1);
        counts[idx] += 1;
    }
    let total = samples.len() as f64;

    let mut csv = csvio::create(
        &cfg.out,
        &format!("laplace_histogram_{algo}.csv"),
        "laplace_histogram v1",
        "bin_left,bin_right,frequency,true_density_at_center",
    )?;
    for (i, &count) in counts.iter().enumerate() {
        let left = lo + i as f64 * width;
        let right = lo + (i + 1) as f64 * width;
        let center = 0.5 * (left + right);
        let frequency = count as f64 / (total * width);
        let truth = 0.5 * (-center.abs()).exp();
        csv.row(&format!("{left},{right},{frequency},{truth}"))?;
    }
    csv.finish()
}
