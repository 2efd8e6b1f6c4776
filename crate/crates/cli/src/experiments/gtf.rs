//! Graph trend filtering: Gaussian observations on a graph, smoothed by a
//! stochastic TV penalty. Chains advance in lockstep between checkpoints so
//! each trace row carries the true cumulative sampling CPU time.

use std::sync::Arc;

use rand::SeedableRng;
use rayon::prelude::*;
use splangevin::graph::{
    full_tv_prox_dual, gtf_potential, load_snap_edge_list, make_grid_graph, tv_energy,
    write_remap_csv, GtfProblem,
};
use splangevin::metrics::functional_trace;
use splangevin::sampler::{
    run_observed, Algorithm, ChainState, FullProx, Regime, SampleStore, SampleTag, SamplerRng,
    Schedule, StepPlan, StoreConfig,
};
use splangevin::Real;

use crate::config::{write_manifest, GraphSource, Resolved};
use crate::cpu::process_cpu_seconds;
use crate::csvio;
use crate::errors::{CliError, CliResult};
use crate::experiments::{chain_seed, checkpoints, numerical};

/// Salt for the inpainting-mask stream, so the mask never reuses the
/// observation draws.
const MASK_SALT: u64 = 0x6d61_736b_7631;

/// Dual ascent budget for the exact TV prox inside proxla.
const DUAL_MAX_ITERS: usize = 20_000;
const DUAL_TOL: f64 = 1e-8;

pub fn run_experiment(cfg: &Resolved) -> CliResult<()> {
    let (graph, original_ids) = match &cfg.graph {
        GraphSource::Grid(rows, cols) => {
            let g = make_grid_graph(*rows, *cols)
                .map_err(|e| CliError::usage(format!("grid {rows}x{cols}: {e}")))?;
            (g, None)
        }
        GraphSource::File(path) => {
            let load = load_snap_edge_list(path).map_err(|e| {
                CliError::usage(format!("graph file `{}`: {e}", path.display()))
            })?;
            (load.graph, Some(load.original_ids))
        }
    };
    let graph = Arc::new(graph);
    let dim = graph.num_vertices();
    let num_edges = graph.num_edges();

    let mut rng = SamplerRng::seed_from_u64(cfg.seed);
    let mut y: Vec<f64> = (0..dim)
        .map(|_| f64::draw_standard_normal(&mut rng))
        .collect();
    if cfg.inpaint {
        let mut mask_rng = SamplerRng::seed_from_u64(cfg.seed ^ MASK_SALT);
        for idx in rand::seq::index::sample(&mut mask_rng, dim, dim / 2) {
            y[idx] = 0.0;
        }
    }

    let lambda = match cfg.lambda {
        Some(l) => l,
        None => {
            // Balance the fidelity and penalty scales of the observed signal.
            let tv = tv_energy(&y, &graph, 1.0).map_err(numerical)?;
            if !(tv > 0.0) {
                return Err(CliError::usage(
                    "the observed signal has zero total variation on this graph; \
                     pass lambda explicitly",
                ));
            }
            0.5 * y.iter().map(|v| v * v).sum::<f64>() / tv
        }
    };
    let n_batch = cfg.n_batch.unwrap_or_else(|| (num_edges / 2).max(1));
    let problem = GtfProblem::new(graph.clone(), y, cfg.sigma, lambda, n_batch)
        .map_err(|e| CliError::usage(e.to_string()))?;

    let mut manifest = cfg.manifest_common();
    match &cfg.graph {
        GraphSource::Grid(r, c) => manifest.push(("grid", format!("{r}x{c}"))),
        GraphSource::File(p) => manifest.push(("graph", p.display().to_string())),
    }
    manifest.push(("inpaint", cfg.inpaint.to_string()));
    manifest.push(("sigma", cfg.sigma.to_string()));
    manifest.push(("lambda", lambda.to_string()));
    manifest.push(("n_batch", n_batch.to_string()));
    manifest.push(("edge_cap", cfg.edge_cap.to_string()));
    write_manifest(&cfg.out, &manifest)?;
    if let Some(ids) = &original_ids {
        write_remap_csv(cfg.out.join("vertex_remap.csv"), ids)
            .map_err(|e| CliError::usage(e.to_string()))?;
    }

    let mut algos = cfg.algos.clone();
    if num_edges > cfg.edge_cap && algos.contains(&Algorithm::ProxLa) {
        eprintln!(
            "proxla skipped: the graph has {num_edges} edges, above the edge cap of {}; \
             the exact TV prox is too expensive at that size (raise edge_cap to force it)",
            cfg.edge_cap
        );
        algos.retain(|&a| a != Algorithm::ProxLa);
        if algos.is_empty() {
            return Err(CliError::usage(
                "no algorithms left to run: proxla was refused by the edge cap",
            ));
        }
    }

    let ks = checkpoints(cfg.iters, cfg.tail_stride);
    for &algo in &algos {
        run_one(cfg, algo, &problem, &ks)?;
    }
    Ok(())
}

/// Steps all chains from checkpoint to checkpoint, snapshotting process CPU
/// around each parallel stepping phase so diagnostics stay off the clock.
fn run_one(cfg: &Resolved, algo: Algorithm, problem: &GtfProblem<f64>, ks: &[u64]) -> CliResult<()> {
    let pot = gtf_potential(problem);
    let full_prox: Option<Box<FullProx<f64>>> = match algo {
        Algorithm::ProxLa => {
            let graph = problem.graph().clone();
            let lambda = problem.lambda();
            Some(Box::new(move |x: &[f64], g: f64| {
                full_tv_prox_dual(x, &graph, g * lambda, DUAL_MAX_ITERS, DUAL_TOL)
            }))
        }
        _ => None,
    };
    let silent = StoreConfig {
        record_x: false,
        record_y0: false,
        schedule: Schedule::Every(u64::MAX),
    };

    let mut states: Vec<ChainState<f64>> = (0..cfg.chains)
        .map(|i| ChainState::new(problem.y().to_vec(), chain_seed(cfg.seed, i)))
        .collect();
    let mut stores: Vec<SampleStore<f64>> = states
        .iter()
        .map(|s| {
            let mut store = SampleStore::new(s.x.len());
            store.push(0, SampleTag::X, s.x.clone());
            store
        })
        .collect();

    let mut cpu_at = vec![0.0f64; ks.len()];
    let mut cumulative = 0.0f64;
    for w in 1..ks.len() {
        let plan = StepPlan::new(cfg.gamma, ks[w] - ks[w - 1], Regime::StronglyConvex)
            .expect("gamma validated");
        let before = process_cpu_seconds();
        let results: Vec<splangevin::Result<SampleStore<f64>>> = states
            .par_iter_mut()
            .map(|state| {
                run_observed(algo, &pot, state, &plan, &silent, full_prox.as_deref(), |_| {})
            })
            .collect();
        cumulative += process_cpu_seconds() - before;
        cpu_at[w] = cumulative;
        for (i, result) in results.into_iter().enumerate() {
            let segment = result.map_err(numerical)?;
            if let Some(msg) = segment.abort() {
                return Err(CliError::numerical(format!(
                    "{algo} chain {i} aborted at iteration {}: {msg}",
                    states[i].k
                )));
            }
        }
        for (state, store) in states.iter().zip(stores.iter_mut()) {
            store.push(ks[w], SampleTag::X, state.x.clone());
        }
    }

    let trace = functional_trace(
        &stores,
        |x: &[f64]| problem.potential_value(x).expect("dimension matches"),
        stores.len(),
    )
    .map_err(numerical)?;

    let mut csv = csvio::create(
        &cfg.out,
        &format!("gtf_trace_{algo}.csv"),
        "gtf_trace v1",
        "iteration,cpu_seconds,entropy,energy,functional",
    )?;
    for rec in &trace {
        let slot = ks.binary_search(&rec.k).expect("checkpoint recorded");
        csv.row(&format!(
            "{},{:.6},{},{},{}",
            rec.k, cpu_at[slot], rec.entropy, rec.potential_energy, rec.functional
        ))?;
    }
    csv.finish()
}
