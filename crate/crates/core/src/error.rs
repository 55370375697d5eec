use thiserror::Error;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("carrier matrix is ill-conditioned for N={n}, alpha={alpha} (reciprocal condition {rcond:e})")]
    IllConditioned { n: usize, alpha: f64, rcond: f64 },

    #[error("exhaustive search over {candidates} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { candidates: u128, cap: u128 },

    #[error("factorization failed: {0}")]
    FactorizationFailed(String),

    #[error("operation counting was disabled for this detector run")]
    CountingDisabled,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config file error: {0}")]
    ConfigFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
