use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dense object with {entries} entries exceeds the cap of {cap}")]
    Size { entries: usize, cap: usize },

    #[error("eigensolver did not converge (achieved residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("decomposition incomplete: reconstruction residual {residual:e}")]
    Decomposition { residual: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("compilation failed at diagram {diagram}: {reason}")]
    Compile { diagram: String, reason: String },

    #[error("no linear recurrence of order <= {max_order} fits the sequence")]
    OrderExceeded { max_order: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
