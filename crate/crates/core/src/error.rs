use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A value tuple component fell outside its subsystem alphabet.
    #[error("index error at position {position}: value {value} is not below dimension {dim}")]
    Index {
        position: usize,
        value: usize,
        dim: usize,
    },

    /// Inconsistent systems, subsets, partitions or shapes.
    #[error("{0}")]
    Invalid(String),

    /// A computation would exceed a configured size bound.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A table failed the bijection check.
    #[error("table is not a bijection: {0}")]
    NotBijective(String),

    /// A matrix failed the unitarity (or state) certificate.
    #[error("certificate failed: {what} deviates by {deviation:e} (tolerance {tol:e})")]
    Certificate {
        what: String,
        deviation: f64,
        tol: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
