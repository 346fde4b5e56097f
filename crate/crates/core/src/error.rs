use thiserror::Error;

/// Errors raised by the partition toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("unsupported deletion kernel: {0}")]
    UnsupportedKernel(String),

    #[error("series did not reach tolerance within {cap} terms")]
    NonConvergence { cap: usize },

    #[error("divergent measure: {0}")]
    DivergentMeasure(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("moment oracle failure: {0}")]
    Oracle(String),

    #[error("chi-square test needs at least two bins after pooling, got {0}")]
    TooFewBins(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
