//! The three experiment drivers and the plumbing they share.

pub mod gaussian;
pub mod gtf;
pub mod laplace;

use splangevin::sampler::{Algorithm, SampleStore, Schedule};

use crate::errors::{CliError, CliResult};

/// Seed of replicate chain `i`. Offset by one so chain 0 never shares a
/// stream with the data/mask draws, which use the master seed directly.
pub fn chain_seed(seed: u64, chain: usize) -> u64 {
    seed.wrapping_add(1).wrapping_add(chain as u64)
}

/// The recorded iterations: 0 plus every k the cadence selects.
pub fn checkpoints(iters: u64, tail_stride: u64) -> Vec<u64> {
    let schedule = Schedule::GeometricWithTail { tail_stride };
    let mut ks = vec![0];
    ks.extend((1..=iters).filter(|&k| schedule.records(k)));
    ks
}

/// Promotes a chain's abort annotation to a run-level numerical failure.
pub fn check_abort(algo: Algorithm, chain: usize, store: &SampleStore<f64>) -> CliResult<()> {
    match store.abort() {
        Some(msg) => Err(CliError::numerical(format!(
            "{algo} chain {chain} aborted: {msg}"
        ))),
        None => Ok(()),
    }
}

/// Maps a library error during sampling or diagnostics to exit code 2.
pub fn numerical(e: splangevin::Error) -> CliError {
    CliError::numerical(e.to_string())
}
