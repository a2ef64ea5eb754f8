//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the computation and data modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A value falls outside the domain a function is defined on.
    #[error("outside domain: {0}")]
    Domain(String),

    /// A bundled or user-supplied data file is missing or malformed.
    #[error("data error: {0}")]
    Config(String),

    /// An identifier was not found in a catalog or registry.
    #[error("unknown identifier: {0}")]
    UnknownId(String),

    /// The Gini coefficient is undefined when the observation mean is zero.
    #[error("mean of observations is zero; Gini is undefined")]
    ZeroMean,
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
