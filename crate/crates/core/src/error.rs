use thiserror::Error;

use crate::kappa::KappaClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin j = {0}: j must be a positive multiple of 1/2")]
    InvalidSpin(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown kappa class '{0}' (expected one of 0, pj/2, pj, 3pj/2, 2pj, 5pj/2, 3pj, 7pj/2, 4pj)")]
    UnknownKappaClass(String),

    #[error("kappa = {class} has no recurrence at j = {j}")]
    NoRecurrence { j: f64, class: KappaClass },

    #[error("{check} is defined for integer spin only, got j = {j}")]
    ParityMismatch { check: &'static str, j: f64 },

    #[error("period mismatch at j = {j}, kappa = {class}: expected {expected:?}, found {found:?}")]
    TableMismatch {
        j: f64,
        class: KappaClass,
        expected: Option<usize>,
        found: Option<usize>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
