//! Strong-convexity check on `U(x) = ½x²` (target `N(0, 1)`, `L = α = 1`,
//! no nonsmooth part). Tracks the squared Wasserstein-2 distance of the
//! chain cross-section against the analytic contraction bound
//! `(1 − γα)^k·W₀² + γ·2Ld/α`.

use rayon::prelude::*;
use splangevin::metrics::{gaussian_quantile_cloud, wasserstein2_1d_samples};
use splangevin::prox::ProxChain;
use splangevin::sampler::{
    run, Algorithm, CompositePotential, FullProx, Regime, SampleStore, SampleTag, Schedule,
    StepPlan, StoreConfig,
};

use crate::config::{write_manifest, Resolved};
use crate::csvio;
use crate::errors::CliResult;
use crate::experiments::{chain_seed, check_abort, numerical};

fn potential() -> CompositePotential<f64, ()> {
    CompositePotential::new(
        1,
        splangevin::sampler::SmoothConstants::new(1.0, 1.0, 0.0).expect("constants are valid"),
        |x: &[f64], _xi: &(), out: &mut [f64]| out.copy_from_slice(x),
        |_xi: &()| ProxChain::empty(),
        |_rng| (),
    )
    .with_full_value(|x| 0.5 * x[0] * x[0])
}

pub fn run_experiment(cfg: &Resolved) -> CliResult<()> {
    let mut manifest = cfg.manifest_common();
    manifest.push(("x0", cfg.x0.to_string()));
    write_manifest(&cfg.out, &manifest)?;

    let store_cfg = StoreConfig {
        record_x: true,
        record_y0: false,
        schedule: Schedule::GeometricWithTail {
            tail_stride: cfg.tail_stride,
        },
    };
    let pot = potential();
    let plan =
        StepPlan::new(cfg.gamma, cfg.iters, Regime::StronglyConvex).expect("gamma validated");
    let cloud = gaussian_quantile_cloud(cfg.chains, 0.0, 1.0);
    // W₀² = W²(δ_{x0}, N(0,1)) and the contraction factor, with L = α = d = 1.
    let w0_sq = cfg.x0 * cfg.x0 + 1.0;
    let factor = (1.0 - cfg.gamma).max(0.0);

    for &algo in &cfg.algos {
        let full_prox: Option<Box<FullProx<f64>>> = match algo {
            // No nonsmooth part: the full prox is the identity.
            Algorithm::ProxLa => Some(Box::new(|x: &[f64], _g: f64| Ok(x.to_vec()))),
            _ => None,
        };
        let stores: Vec<SampleStore<f64>> = (0..cfg.chains)
            .into_par_iter()
            .map(|i| {
                run(
                    algo,
                    &pot,
                    vec![cfg.x0],
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

        let ks: Vec<u64> = stores[0].iterations(SampleTag::X).collect();
        let mut csv = csvio::create(
            &cfg.out,
            &format!("gaussian_w2_{algo}.csv"),
            "gaussian_w2 v1",
            "iteration,w2,bound",
        )?;
        for (slot, &k) in ks.iter().enumerate() {
            let cross: Vec<f64> = stores
                .iter()
                .map(|s| s.nth_point(SampleTag::X, slot)[0])
                .collect();
            let w2 = wasserstein2_1d_samples(&cross, &cloud).map_err(numerical)?;
            let bound = factor.powf(k as f64) * w0_sq + 2.0 * cfg.gamma;
            csv.row(&format!("{k},{w2},{bound}"))?;
        }
        csv.finish()?;
    }
    Ok(())
}
