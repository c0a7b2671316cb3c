use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("time point {0:?} is not in the admissible set")]
    NotInSigma(Vec<f64>),

    #[error("no admissible time of depth {requested}; deepest available is {max_depth}")]
    NoDeepTime { requested: f64, max_depth: f64 },

    #[error("fields live on different domains")]
    DomainMismatch,

    #[error("time point {0:?} lies outside the cone")]
    TimeOutsideCone(Vec<f64>),

    #[error("non-finite state{}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    NonFiniteState { step: Option<usize> },

    #[error("direction {0:?} is not interior to the cone")]
    DirectionNotInterior(Vec<f64>),

    #[error("point is {distance} away from the attractor estimate (limit {limit})")]
    NotOnAttractor { distance: f64, limit: f64 },

    #[error("sample is not a member of the bornology: {0}")]
    NotInBornology(String),

    #[error("axis {0} is not periodic")]
    NonPeriodicAxis(usize),

    #[error("solver did not converge; final residual {}", history.last().copied().unwrap_or(f64::NAN))]
    NoConvergence { history: Vec<f64> },

    #[error("empty region: {0}")]
    EmptyRegion(String),

    #[error("unsupported nonlinearity: {0}")]
    UnsupportedNonlinearity(String),

    #[error("domain is not semi-invariant under shift {0:?}")]
    NotSemiInvariant(Vec<i64>),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("profile has no entries")]
    EmptyProfile,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
