//! The verification suites behind `verify <suite>`.

pub mod bijection;
pub mod coding;
pub mod operators;
pub mod ramsey;
pub mod symmetry;

use serde::{Deserialize, Serialize};

/// Scheduling options; they never change a report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exec {
    pub parallel: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] finpart::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

pub const SUITES: [&str; 6] = ["fact00", "nilpotency", "bijection", "ramsey", "coding", "symmetry"];
