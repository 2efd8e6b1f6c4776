//! `splangevin`: batch driver for the composite-potential Langevin samplers.
//!
//! Three experiment families, each emitting versioned CSVs plus a manifest
//! that reproduces the run byte for byte (CPU-time columns aside):
//!
//! ```text
//! splangevin laplace_toy      --gamma 0.05 --iters 2000 --out runs/laplace
//! splangevin gaussian_strong  --x0 4 --chains 10000     --out runs/gauss
//! splangevin gtf --grid 20x20 --algo spla,ssla,proxla   --out runs/gtf
//! ```
//!
//! Exit codes: 0 on success, 1 on configuration errors, 2 on numerical
//! failure during a run.

mod config;
mod cpu;
mod csvio;
mod errors;
mod experiments;

use clap::{Parser, Subcommand};

use config::{Experiment, RunArgs};
use errors::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "splangevin",
    version,
    about = "Composite-potential Langevin sampling experiments",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Laplace toy target π ∝ e^{−|x|} with a stochastic absolute value.
    #[command(name = "laplace_toy")]
    LaplaceToy(RunArgs),
    /// Strongly convex check on U = ½x² against the contraction bound.
    #[command(name = "gaussian_strong")]
    GaussianStrong(RunArgs),
    /// Graph trend filtering on a grid or a SNAP edge list.
    #[command(name = "gtf")]
    Gtf(RunArgs),
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let (experiment, args) = match cli.command {
        Cmd::LaplaceToy(args) => (Experiment::LaplaceToy, args),
        Cmd::GaussianStrong(args) => (Experiment::GaussianStrong, args),
        Cmd::Gtf(args) => (Experiment::Gtf, args),
    };
    match execute(experiment, args) {
        Ok(()) => 0,
        Err(e) => {
            let label = match e {
                CliError::Usage(_) => "config error",
                CliError::Numerical(_) => "numerical failure",
            };
            eprintln!("{label}: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(experiment: Experiment, args: RunArgs) -> CliResult<()> {
    let file = match &args.config {
        Some(path) => config::parse_file(path)?,
        None => config::Overlay::default(),
    };
    let flags = config::overlay_from_flags(&args)?;
    let merged = config::merge(file, flags)?;
    let cfg = config::resolve(experiment, merged)?;
    std::fs::create_dir_all(&cfg.out).map_err(|e| {
        CliError::usage(format!(
            "cannot create output directory `{}`: {e}",
            cfg.out.display()
        ))
    })?;
    match experiment {
        Experiment::LaplaceToy => experiments::laplace::run_experiment(&cfg),
        Experiment::GaussianStrong => experiments::gaussian::run_experiment(&cfg),
        Experiment::Gtf => experiments::gtf::run_experiment(&cfg),
    }
}
