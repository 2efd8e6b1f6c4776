//! Experiment configuration: CLI flags, the `key = value` config file, the
//! merge rule (flags override the file), per-experiment defaults, validation,
//! and the run manifest echoed into every output directory.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use splangevin::sampler::Algorithm;

use crate::errors::{CliError, CliResult};

/// Every key the config file accepts, sorted, for the unknown-key message.
pub const VALID_KEYS: &[&str] = &[
    "algo",
    "chains",
    "edge_cap",
    "experiment",
    "gamma",
    "graph",
    "grid",
    "inpaint",
    "iters",
    "lambda",
    "n_batch",
    "out",
    "seed",
    "sigma",
    "tail_stride",
    "version",
    "x0",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    LaplaceToy,
    GaussianStrong,
    Gtf,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::LaplaceToy => "laplace_toy",
            Experiment::GaussianStrong => "gaussian_strong",
            Experiment::Gtf => "gtf",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "laplace_toy" => Ok(Experiment::LaplaceToy),
            "gaussian_strong" => Ok(Experiment::GaussianStrong),
            "gtf" => Ok(Experiment::Gtf),
            other => Err(format!(
                "unknown experiment `{other}` (expected laplace_toy, gaussian_strong or gtf)"
            )),
        }
    }
}

/// Flags shared by every experiment subcommand. Anything left unset falls
/// back to the config file and then to the experiment defaults.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Line-oriented `key = value` config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated algorithms out of: spla, ssla, proxla, la.
    #[arg(long)]
    pub algo: Option<String>,
    /// Step size γ (must be positive).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Number of iterations per chain.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Master seed; every random stream of the run derives from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of replicate chains.
    #[arg(long)]
    pub chains: Option<usize>,
    /// Checkpoint tail stride; checkpoints are powers of two plus every
    /// multiple of this.
    #[arg(long)]
    pub tail_stride: Option<u64>,
    /// Starting point (gaussian_strong only).
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// SNAP edge-list file (gtf only).
    #[arg(long, conflicts_with = "grid")]
    pub graph: Option<PathBuf>,
    /// Grid dimensions `ROWSxCOLS` (gtf only).
    #[arg(long)]
    pub grid: Option<String>,
    /// Trend-filtering penalty λ; derived from the data when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Observation noise scale σ (gtf only).
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Edges drawn per stochastic gradient (gtf only).
    #[arg(long)]
    pub n_batch: Option<usize>,
    /// Zero half of the observed coordinates, mask drawn from the seed.
    #[arg(long)]
    pub inpaint: bool,
    /// Largest edge count proxla will accept (gtf only).
    #[arg(long)]
    pub edge_cap: Option<usize>,
    /// Output directory for CSVs and the manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One layer of settings; `None` means "not given at this layer".
#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub experiment: Option<Experiment>,
    pub algo: Option<Vec<Algorithm>>,
    pub gamma: Option<f64>,
    pub iters: Option<u64>,
    pub seed: Option<u64>,
    pub chains: Option<usize>,
    pub tail_stride: Option<u64>,
    pub x0: Option<f64>,
    pub graph: Option<PathBuf>,
    pub grid: Option<(usize, usize)>,
    pub lambda: Option<f64>,
    pub sigma: Option<f64>,
    pub n_batch: Option<usize>,
    pub inpaint: Option<bool>,
    pub edge_cap: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Where the GTF graph comes from.
#[derive(Debug, Clone)]
pub enum GraphSource {
    Grid(usize, usize),
    File(PathBuf),
}

/// Fully resolved configuration: defaults applied, invariants checked.
/// Fields irrelevant to the chosen experiment hold their defaults and are
/// not echoed into the manifest.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub experiment: Experiment,
    pub algos: Vec<Algorithm>,
    pub gamma: f64,
    pub iters: u64,
    pub seed: u64,
    pub chains: usize,
    pub tail_stride: u64,
    pub out: PathBuf,
    pub x0: f64,
    pub graph: GraphSource,
    pub lambda: Option<f64>,
    pub sigma: f64,
    pub n_batch: Option<usize>,
    pub inpaint: bool,
    pub edge_cap: usize,
}

struct Defaults {
    algos: &'static [Algorithm],
    gamma: f64,
    iters: u64,
    chains: usize,
    tail_stride: u64,
}

fn defaults(experiment: Experiment) -> Defaults {
    match experiment {
        Experiment::LaplaceToy => Defaults {
            algos: &[Algorithm::Spla, Algorithm::Ssla],
            gamma: 0.05,
            iters: 2000,
            chains: 200,
            tail_stride: 50,
        },
        Experiment::GaussianStrong => Defaults {
            algos: &[Algorithm::La],
            gamma: 0.1,
            iters: 200,
            chains: 10_000,
            tail_stride: 10,
        },
        Experiment::Gtf => Defaults {
            algos: &[Algorithm::Spla, Algorithm::Ssla, Algorithm::ProxLa],
            gamma: 0.25,
            iters: 2000,
            chains: 16,
            tail_stride: 50,
        },
    }
}

/// Parses a config file. Unknown keys and type mismatches are reported with
/// their line number.
pub fn parse_file(path: &Path) -> CliResult<Overlay> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::usage(format!("cannot read config file `{}`: {e}", path.display()))
    })?;
    let mut overlay = Overlay::default();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "{}:{lineno}: expected `key = value`, got `{line}`",
                path.display()
            )));
        };
        set_key(&mut overlay, key.trim(), value.trim())
            .map_err(|msg| CliError::usage(format!("{}:{lineno}: {msg}", path.display())))?;
    }
    Ok(overlay)
}

fn set_key(o: &mut Overlay, key: &str, value: &str) -> Result<(), String> {
    match key {
        "experiment" => o.experiment = Some(value.parse()?),
        "algo" => o.algo = Some(parse_algos(value)?),
        "gamma" => o.gamma = Some(parse_num(key, value, "a number")?),
        "iters" => o.iters = Some(parse_num(key, value, "a non-negative integer")?),
        "seed" => o.seed = Some(parse_num(key, value, "a non-negative integer")?),
        "chains" => o.chains = Some(parse_num(key, value, "a non-negative integer")?),
        "tail_stride" => o.tail_stride = Some(parse_num(key, value, "a non-negative integer")?),
        "x0" => o.x0 = Some(parse_num(key, value, "a number")?),
        "lambda" => o.lambda = Some(parse_num(key, value, "a number")?),
        "sigma" => o.sigma = Some(parse_num(key, value, "a number")?),
        "n_batch" => o.n_batch = Some(parse_num(key, value, "a non-negative integer")?),
        "edge_cap" => o.edge_cap = Some(parse_num(key, value, "a non-negative integer")?),
        "inpaint" => o.inpaint = Some(parse_bool(key, value)?),
        "graph" => o.graph = Some(PathBuf::from(value)),
        "grid" => o.grid = Some(parse_grid(value)?),
        "out" => o.out = Some(PathBuf::from(value)),
        // Written by the manifest; accepted so a manifest reloads verbatim.
        "version" => {}
        other => {
            return Err(format!(
                "unknown key `{other}` (valid keys: {})",
                VALID_KEYS.join(", ")
            ))
        }
    }
    Ok(())
}

fn parse_num<T: FromStr>(key: &str, value: &str, expects: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("key `{key}` expects {expects}, got `{value}`"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("key `{key}` expects true or false, got `{other}`")),
    }
}

pub fn parse_algos(list: &str) -> Result<Vec<Algorithm>, String> {
    let mut out = Vec::new();
    for part in list.split(',') {
        let name = part.trim();
        if name.is_empty() {
            return Err("empty algorithm name in list".into());
        }
        let algo: Algorithm = name.parse()?;
        if !out.contains(&algo) {
            out.push(algo);
        }
    }
    Ok(out)
}

pub fn parse_grid(spec: &str) -> Result<(usize, usize), String> {
    let err = || format!("grid expects `ROWSxCOLS` with positive sides, got `{spec}`");
    let Some((rows, cols)) = spec.split_once(['x', 'X']) else {
        return Err(err());
    };
    let rows: usize = rows.trim().parse().map_err(|_| err())?;
    let cols: usize = cols.trim().parse().map_err(|_| err())?;
    if rows == 0 || cols == 0 {
        return Err(err());
    }
    Ok((rows, cols))
}

/// Lifts the flag layer into an [`Overlay`], parsing the stringly flags.
pub fn overlay_from_flags(args: &RunArgs) -> CliResult<Overlay> {
    Ok(Overlay {
        experiment: None,
        algo: args
            .algo
            .as_deref()
            .map(parse_algos)
            .transpose()
            .map_err(CliError::usage)?,
        gamma: args.gamma,
        iters: args.iters,
        seed: args.seed,
        chains: args.chains,
        tail_stride: args.tail_stride,
        x0: args.x0,
        graph: args.graph.clone(),
        grid: args
            .grid
            .as_deref()
            .map(parse_grid)
            .transpose()
            .map_err(CliError::usage)?,
        lambda: args.lambda,
        sigma: args.sigma,
        n_batch: args.n_batch,
        inpaint: args.inpaint.then_some(true),
        edge_cap: args.edge_cap,
        out: args.out.clone(),
    })
}

/// Flags win over the file, field by field. A flag-side graph source also
/// displaces the file's choice of the other kind.
pub fn merge(mut file: Overlay, flags: Overlay) -> CliResult<Overlay> {
    if flags.graph.is_some() || flags.grid.is_some() {
        file.graph = None;
        file.grid = None;
    }
    let merged = Overlay {
        experiment: flags.experiment.or(file.experiment),
        algo: flags.algo.or(file.algo),
        gamma: flags.gamma.or(file.gamma),
        iters: flags.iters.or(file.iters),
        seed: flags.seed.or(file.seed),
        chains: flags.chains.or(file.chains),
        tail_stride: flags.tail_stride.or(file.tail_stride),
        x0: flags.x0.or(file.x0),
        graph: flags.graph.or(file.graph),
        grid: flags.grid.or(file.grid),
        lambda: flags.lambda.or(file.lambda),
        sigma: flags.sigma.or(file.sigma),
        n_batch: flags.n_batch.or(file.n_batch),
        inpaint: flags.inpaint.or(file.inpaint),
        edge_cap: flags.edge_cap.or(file.edge_cap),
        out: flags.out.or(file.out),
    };
    if merged.graph.is_some() && merged.grid.is_some() {
        return Err(CliError::usage(
            "`graph` and `grid` are mutually exclusive; give exactly one",
        ));
    }
    Ok(merged)
}

/// Applies per-experiment defaults and checks every invariant, naming the
/// violated constraint in the message.
pub fn resolve(experiment: Experiment, o: Overlay) -> CliResult<Resolved> {
    let d = defaults(experiment);

    let gamma = o.gamma.unwrap_or(d.gamma);
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(CliError::usage(format!(
            "gamma must be positive and finite (the step size requires gamma > 0), got {gamma}"
        )));
    }
    let chains = o.chains.unwrap_or(d.chains);
    if chains == 0 {
        return Err(CliError::usage("chains must be at least 1, got 0"));
    }
    let tail_stride = o.tail_stride.unwrap_or(d.tail_stride);
    if tail_stride == 0 {
        return Err(CliError::usage("tail_stride must be at least 1, got 0"));
    }
    let sigma = o.sigma.unwrap_or(1.0);
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(CliError::usage(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    if let Some(lambda) = o.lambda {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(CliError::usage(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
    }
    if o.n_batch == Some(0) {
        return Err(CliError::usage("n_batch must be at least 1, got 0"));
    }
    let x0 = o.x0.unwrap_or(4.0);
    if !x0.is_finite() {
        return Err(CliError::usage(format!("x0 must be finite, got {x0}")));
    }
    let algos = o.algo.unwrap_or_else(|| d.algos.to_vec());
    if algos.is_empty() {
        return Err(CliError::usage("algo must list at least one algorithm"));
    }

    let graph = match (o.graph, o.grid) {
        (Some(path), None) => GraphSource::File(path),
        (None, Some((r, c))) => GraphSource::Grid(r, c),
        (None, None) => GraphSource::Grid(20, 20),
        (Some(_), Some(_)) => unreachable!("rejected in merge"),
    };

    Ok(Resolved {
        experiment,
        algos,
        gamma,
        iters: o.iters.unwrap_or(d.iters),
        seed: o.seed.unwrap_or(42),
        chains,
        tail_stride,
        out: o
            .out
            .unwrap_or_else(|| PathBuf::from(format!("splangevin_{}", experiment.name()))),
        x0,
        graph,
        lambda: o.lambda,
        sigma,
        n_batch: o.n_batch,
        inpaint: o.inpaint.unwrap_or(false),
        edge_cap: o.edge_cap.unwrap_or(10_000),
    })
}

impl Resolved {
    /// Manifest lines common to all experiments, in fixed order.
    pub fn manifest_common(&self) -> Vec<(&'static str, String)> {
        let algos: Vec<&str> = self.algos.iter().map(|a| a.name()).collect();
        vec![
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("experiment", self.experiment.name().to_string()),
            ("seed", self.seed.to_string()),
            ("gamma", self.gamma.to_string()),
            ("iters", self.iters.to_string()),
            ("chains", self.chains.to_string()),
            ("tail_stride", self.tail_stride.to_string()),
            ("algo", algos.join(",")),
            ("out", self.out.display().to_string()),
        ]
    }
}

/// Writes `manifest.txt` into `dir`. The file is itself a valid config file,
/// so passing it back via `--config` re-runs the experiment exactly.
pub fn write_manifest(dir: &Path, entries: &[(&'static str, String)]) -> CliResult<()> {
    use std::io::Write;
    let path = dir.join("manifest.txt");
    let file = std::fs::File::create(&path)
        .map_err(|e| CliError::usage(format!("cannot create `{}`: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    let io_err = |e| CliError::usage(format!("cannot write `{}`: {e}", path.display()));
    writeln!(
        w,
        "# splangevin run manifest; pass this file back via --config to re-run"
    )
    .map_err(io_err)?;
    for (key, value) in entries {
        writeln!(w, "{key} = {value}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
