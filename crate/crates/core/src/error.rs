use std::path::PathBuf;

/// Errors produced by the identification library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("design matrix is rank deficient: numerical rank {rank} of {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("backward called without a preceding forward pass")]
    StaleCache,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("odd polynomial order required, got {0}")]
    EvenOrder(usize),

    #[error("unknown model kind `{0}`")]
    InvalidKind(String),

    #[error("signal is empty")]
    EmptySignal,

    #[error("corrupt signal header: {0}")]
    CorruptHeader(String),

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("zero self-interference power in evaluation window")]
    ZeroSignalPower,

    #[error("training diverged at epoch {epoch}, batch {batch}: {reason}")]
    Diverged {
        epoch: usize,
        batch: usize,
        reason: String,
    },

    #[error("run {run} failed: {source}")]
    RunFailed {
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed document: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by a run blowing up rather than by bad input.
    pub fn is_divergence(&self) -> bool {
        match self {
            Error::Diverged { .. } | Error::NonFinite(_) => true,
            Error::RunFailed { source, .. } => source.is_divergence(),
            _ => false,
        }
    }
}
