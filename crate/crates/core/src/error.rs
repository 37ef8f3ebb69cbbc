//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid generator polynomial: {0}")]
    Polynomial(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid rate profile: {0}")]
    Profile(String),

    #[error("column {index} of the matrix has zero weight")]
    ZeroColumn { index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
