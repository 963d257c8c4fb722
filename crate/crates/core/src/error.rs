//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("field contains NaN or infinite values ({0})")]
    NanField(String),

    #[error("computational domain too small: {0}")]
    DomainTooSmall(String),

    #[error("series truncation too coarse: {0}")]
    Truncation(String),

    #[error("blow-up detected at t = {time}: {what} = {value:.3e}")]
    BlowUp { time: f64, what: String, value: f64 },

    #[error("fixed-point iteration is not contracting: {0}")]
    ContractionFailure(String),

    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),

    #[error("corrupt file: {0}")]
    CorruptFile(String),

    #[error("truncated file: expected {expected} bytes, found {found}")]
    TruncatedFile { expected: u64, found: u64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
