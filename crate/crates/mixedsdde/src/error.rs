use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("grids are incompatible: {0}")]
    GridMismatch(String),

    #[error("empty interval [{a}, {b}]")]
    EmptyInterval { a: f64, b: f64 },

    #[error("non-finite value encountered at {context}")]
    NonFinite { context: String },

    #[error("solver aborted: non-finite state at step {step}")]
    SolverBlowup { step: usize },

    #[error("mollification window 1/n = {window} is below the grid step {dt}")]
    UnresolvableWindow { window: f64, dt: f64 },

    #[error("no closed-form solution registered for problem '{0}'")]
    NoClosedForm(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("insufficient replicas: need at least {needed}, got {got}")]
    InsufficientReplicas { needed: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
