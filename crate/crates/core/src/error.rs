//! Error type shared across the library.

/// Stage of a sampling step at which a non-finite value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Gradient of the smooth part.
    Gradient,
    /// After adding the diffusion noise.
    Noise,
    /// Inside the prox pass, at term `i` (0-based).
    ProxTerm(usize),
}

impl core::fmt::Display for Stage {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Stage::Gradient => write!(f, "gradient"),
            Stage::Noise => write!(f, "noise"),
            Stage::ProxTerm(i) => write!(f, "prox term {i}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("degenerate edge: both endpoints are vertex {0}")]
    DegenerateEdge(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value at iteration {iteration}, stage {stage}")]
    NonFinite { iteration: u64, stage: Stage },

    #[error("non-finite intermediate after prox term {term}")]
    NonFiniteIntermediate { term: usize },

    #[error("prox oracle did not converge after {cycles} sweeps (last movement {movement:.3e})")]
    OracleNoConvergence { cycles: usize, movement: f64 },

    #[error("prox oracle supports dimension <= {max}, got {got}")]
    OracleDimension { max: usize, got: usize },

    #[error(
        "dual ascent for the graph total-variation prox stopped after {iters} iterations \
         with primal residual {residual:.3e}"
    )]
    DualProxNoConvergence {
        iters: usize,
        residual: f64,
        /// Primal iterate at abort, for post-mortem inspection.
        last: Vec<f64>,
    },

    #[error("stochastic term structure unsupported: {0}")]
    UnsupportedChain(String),

    #[error("empirical weights sum to {sum}, expected 1 within {tol}")]
    WeightNormalization { sum: f64, tol: f64 },

    #[error("one-dimensional routine called on {dim}-dimensional data; use wasserstein2_empirical")]
    NotOneDimensional { dim: usize },

    #[error("exact transport mode requires equal sample counts, got {a} and {b}")]
    SizeMismatch { a: usize, b: usize },

    #[error("kernel bandwidth is zero: all {n} samples are identical")]
    ZeroBandwidth { n: usize },

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("non-finite potential value at sample index {index}")]
    NonFinitePotential { index: usize },

    #[error("need at least {needed} chains for the diagnostic, got {got}")]
    TooFewChains { needed: usize, got: usize },

    #[error("not enough samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("{path}:{line}: malformed edge line: {reason}")]
    EdgeListParse {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("edge list `{path}` contains no usable edges")]
    EmptyEdgeList { path: String },

    #[error("duplicate edge ({v}, {w})")]
    DuplicateEdge { v: usize, w: usize },

    #[error("algorithm `proxla` requires a full prox operator")]
    MissingFullProx,

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = core::result::Result<T, Error>;
