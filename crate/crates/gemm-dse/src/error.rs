//! Shared error type for the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A workload failed validation (zero dimension, oversized, bad label).
    #[error("invalid workload: {0}")]
    InvalidWorkload(String),

    /// A tiling configuration does not satisfy the divisibility or AIE-cap
    /// constraints for the workload it was paired with.
    #[error("invalid tiling config: {0}")]
    InvalidConfig(String),

    /// Malformed user input: CSV/JSON documents, flag combinations, bad paths.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A feature vector does not match the feature names a model was trained on.
    #[error("feature mismatch: {0}")]
    FeatureMismatch(String),

    /// A model document failed schema or consistency checks on load.
    #[error("model format: {0}")]
    ModelFormat(String),

    /// The swept design space contains no feasible point for the device.
    #[error("no feasible design")]
    NoFeasibleDesign,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
