use thiserror::Error;

/// Errors raised by the physics and scan layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// βn ≤ 1: the particle is too slow to radiate in this medium.
    #[error("below Cherenkov threshold (beta * n = {beta_n})")]
    BelowThreshold { beta_n: f64 },

    /// n ≤ 1: no velocity below c can radiate.
    #[error("no Cherenkov threshold exists for n = {n}")]
    NoThreshold { n: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
