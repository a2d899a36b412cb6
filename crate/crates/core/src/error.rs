use thiserror::Error;

/// Errors raised by coefficient construction, decompositions and experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("prime {0} is not stored in the Satake data")]
    UnknownPrime(u64),

    #[error("Satake data violates an invariant: {0}")]
    SatakeInvariant(String),

    #[error("cross-check failed for {what}: deviation {deviation:e} exceeds {tolerance:e}")]
    CrossCheck {
        what: String,
        deviation: f64,
        tolerance: f64,
    },

    #[error("table too short: need length {needed}, have {available}")]
    TableTooShort { needed: usize, available: usize },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("mismatched provenance: {0} vs {1}")]
    ProvenanceMismatch(String, String),

    #[error("t-grid is not sorted at index {0}")]
    UnsortedGrid(usize),

    #[error("zero coefficient mass")]
    ZeroMass,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("decomposition reassembly mismatch at n = {n}: deviation {deviation:e}")]
    Reassembly { n: u64, deviation: f64 },

    #[error("cache format error: {0}")]
    Cache(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
