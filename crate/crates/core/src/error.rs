use thiserror::Error;

/// Errors raised by the transform toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown pair id '{0}'")]
    UnknownPair(String),
    #[error("unknown catalog original '{0}'")]
    UnknownOriginal(String),
    #[error("pair {pair} does not admit dimension d={d} (requires {constraint})")]
    DimensionConstraint {
        pair: String,
        d: u32,
        constraint: String,
    },
    #[error("point lies on the edge set: {0}")]
    Edge(String),
    #[error("branch/validity error: {0}")]
    Branch(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("quadrature did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
