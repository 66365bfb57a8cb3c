use thiserror::Error;

/// Failure classes of the engine. The CLI maps each class to an exit status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate matrix (condition {cond:.3e}): {what}")]
    Degenerate { what: String, cond: f64 },
    #[error("immersion is not of full rank at {0}")]
    Immersion(String),
    #[error("frame construction failed: {0}")]
    Frame(String),
    #[error("radical rank not constant: {0}")]
    RankInstability(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl GeomError {
    /// Structural failures are properties of the input geometry rather than
    /// of the request.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            GeomError::RankInstability(_) | GeomError::Immersion(_) | GeomError::Frame(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
