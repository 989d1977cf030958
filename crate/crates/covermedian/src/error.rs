//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("non-finite coordinate in input")]
    NonFiniteCoordinate,

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("cover radii must satisfy 0 < r' < r, got r = {r}, r_prime = {r_prime}")]
    InvalidCoverRadii { r: f64, r_prime: f64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal cost mismatch: running value {running} vs recomputed {recomputed}")]
    CostMismatch { running: f64, recomputed: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
