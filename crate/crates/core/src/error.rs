use thiserror::Error;

use crate::reservoir::Regime;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A documented precondition or invariant was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("unsupported spectral model: {0}")]
    UnsupportedModel(String),

    #[error("no amplitude zeros in the {0:?} regime")]
    NoZeros(Regime),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(
        "horizon too short: omitted tail is bounded by {tail_bound:e}, above tolerance {tolerance:e}; \
         increase t_max"
    )]
    HorizonTooShort { tail_bound: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
