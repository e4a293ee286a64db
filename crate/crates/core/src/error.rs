use thiserror::Error;

/// Errors raised by the simulation and measurement routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("integration failed at step {step}: {reason}")]
    Integration { step: usize, reason: String },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("singular window: log argument {argument} is not positive")]
    SingularWindow { argument: f64 },

    #[error("graph is empty")]
    EmptyGraph,

    #[error("no replicas requested")]
    NoReplicas,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
