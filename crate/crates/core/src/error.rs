use thiserror::Error;

/// Errors raised by mesh ingestion, basis construction and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mesh parse error: {0}")]
    Parse(String),

    #[error("mesh validation failed on {entity}: {reason}")]
    MeshValidation { entity: String, reason: String },

    #[error("dimension mismatch for {space}: expected {expected}, constructed {found}")]
    DimensionMismatch {
        space: String,
        expected: usize,
        found: usize,
    },

    #[error("degenerate entity {0}: zero measure")]
    Degenerate(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
