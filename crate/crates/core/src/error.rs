use thiserror::Error;

/// Errors raised by construction, assembly and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cell index out of range: dim {dim}, index {index} (count {count})")]
    IndexOutOfRange {
        dim: usize,
        index: usize,
        count: usize,
    },

    #[error("invalid operator request: {0}")]
    InvalidVariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("window margin violated: {0}")]
    Margin(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("no admissible fit window: {0}")]
    EmptyWindow(String),

    #[error("sample budget too small: {0}")]
    Budget(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
