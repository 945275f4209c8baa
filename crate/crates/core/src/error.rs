use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, QError>;

#[derive(Debug, Error)]
pub enum QError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series or infinite product hit `max_terms` before converging.
    #[error("{what} did not converge within {terms} terms (partial value {partial})")]
    TruncationFailure {
        what: &'static str,
        terms: usize,
        partial: Complex64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("index {index} out of range (max {max})")]
    Range { index: usize, max: usize },

    /// Two independently computed quantities disagreed beyond tolerance.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
