use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chain length {0} is not a positive even integer")]
    OddLength(usize),
    #[error("magnetization {sz} is unreachable for L = {length}, s = {spin}")]
    EmptySector { length: usize, spin: &'static str, sz: i32 },
    #[error("invalid spin configuration: {0}")]
    InvalidConfiguration(String),
    #[error("site {site} out of range for L = {length}")]
    SiteOutOfRange { site: usize, length: usize },
    #[error("swap pair {pair} out of range for L = {length}")]
    PairOutOfRange { pair: usize, length: usize },
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("operator is not unitary (column norm deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("spectrum too small: need at least {needed} levels, found {found}")]
    SpectrumTooSmall { needed: usize, found: usize },
    #[error("state is not in the sector of the spectrum")]
    SectorMismatch,
    #[error("invalid time schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integer overflow evaluating {0}")]
    Overflow(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[cfg(feature = "harness")]
    #[error("configuration error: {0}")]
    Config(String),
    #[cfg(feature = "harness")]
    #[error("{failed} of {total} realizations failed at {point} (more than 1%)")]
    TooManyFailures { point: String, failed: usize, total: usize },
    #[cfg(feature = "harness")]
    #[error("unknown figure id {0:?}")]
    UnknownFigure(String),
    #[cfg(feature = "harness")]
    #[error("io error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[cfg(feature = "harness")]
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
