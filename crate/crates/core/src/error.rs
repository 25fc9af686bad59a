use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Fock index {n} out of range for dimension {dim}")]
    FockOutOfRange { n: usize, dim: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("truncation headroom violated: top Fock amplitude {top:.3e} exceeds 1e-6 (dim {dim})")]
    Headroom { top: f64, dim: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "quadrature did not converge with {nodes} nodes: relative change {change:.3e} \
         (last estimates {previous} and {current})"
    )]
    NonConvergence {
        nodes: usize,
        change: f64,
        previous: Complex64,
        current: Complex64,
    },

    #[error("grid mismatch between branches {first} and {second}")]
    GridMismatch { first: usize, second: usize },

    #[error("state has no branches")]
    EmptyState,

    #[error("expected {expected} branches, found {found}")]
    BranchCount { expected: usize, found: usize },

    #[error("basis vectors {i} and {j} are not orthogonal (|<b_i|b_j>| = {overlap:.3e})")]
    NonOrthogonalBasis { i: usize, j: usize, overlap: f64 },

    #[error("basis vector {index} has norm {norm}")]
    NonNormalizedBasis { index: usize, norm: f64 },

    #[error("basis is incomplete: {have} vectors for dimension {need} (deficit {})", need - have)]
    IncompleteBasis { have: usize, need: usize },

    #[error("window [{lo}, {hi}] holds {points} grid points, need at least {min}")]
    Window {
        lo: f64,
        hi: f64,
        points: usize,
        min: usize,
    },

    #[error("found {found} fringe maxima in window, need at least 2")]
    TooFewMaxima { found: usize },

    #[error("size cap exceeded: {size} > {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("output directory is locked: {0}")]
    Locked(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::NonConvergence { .. } => 4,
            Error::Io(_) | Error::Locked(_) => 1,
            _ => 3,
        }
    }
}
