use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("trivial halfspace has no tightened complement")]
    TrivialHalfspace,

    #[error("unbounded polyhedron")]
    Unbounded,

    #[error("dominance over empty set is vacuous; use extract_farkas")]
    EmptyDominance,

    #[error("source halfspace not valid for node")]
    SourceNotValid,

    #[error("CG certifier unavailable")]
    CertifierUnavailable,

    #[error("zero normal vector")]
    ZeroNormal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
