use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates its documented invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid user density {density}: {reason}")]
    InvalidDensity { density: f64, reason: String },

    #[error("k-means needs at least {k} points, got {points}")]
    InsufficientPoints { k: usize, points: usize },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    /// A parameter combination that no builder or sweep accepts, e.g. `k > n`.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("no landing spots configured; DLC-AHN needs at least one")]
    NoLandingSpots,

    #[error("expected a {expected} topology, got {found}")]
    MethodMismatch { expected: String, found: String },

    #[error("UAV id {0} does not exist in the topology")]
    UnknownUav(usize),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}
