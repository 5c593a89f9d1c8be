use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("trace has no records")]
    EmptyTrace,

    #[error("round {t} out of range 1..={horizon}")]
    RoundOutOfRange { t: usize, horizon: usize },

    #[error("initial action is infeasible for the scenario set")]
    InfeasibleStart,

    #[error("multiplier search failed: {0}")]
    MultiplierSearch(String),

    #[error("missing gradient prediction at round {t}")]
    MissingPrediction { t: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
