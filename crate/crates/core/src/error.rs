use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A quantity that must be real (or positive, or unitary, ...) failed its
    /// tolerance check. These indicate a bug or a numerically hostile input,
    /// never an expected condition.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("eigensolver did not converge within {0} QR iterations")]
    NonConvergence(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed state file: {0}")]
    Format(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
