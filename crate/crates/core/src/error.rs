use thiserror::Error;

use crate::mesh::BoundaryTag;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("operation requires a radial outline, got {0}")]
    UnsupportedOutline(&'static str),

    #[error("mesh resolution error: {0}")]
    Resolution(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("mesh has no boundary edges tagged {0:?}")]
    Tagging(BoundaryTag),

    /// A matrix expected to be positive definite failed to factor.
    #[error("singular or indefinite matrix: {0}")]
    Singular(String),

    #[error("constraint error: {0}")]
    Constraint(String),

    #[error("weight error: {0}")]
    Weight(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// Denominator of a quotient vanished.
    #[error("quotient undefined: {0}")]
    DivisionDomain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
