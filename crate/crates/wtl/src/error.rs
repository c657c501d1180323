use thiserror::Error;

/// Errors for width computations, bound transfer and sampling recovery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A stored sequence is too short for the requested operation. Operations
    /// fail loudly instead of extrapolating.
    #[error("insufficient stored length: {0}")]
    InsufficientLength(String),

    /// An input sits outside the validity region of a bound; the message
    /// names the violated threshold.
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A tail sum failed to converge within the term budget.
    #[error("divergent tail: {0}")]
    Divergent(String),

    /// Requested enumeration exceeds the representable range.
    #[error("range exceeded: {0}")]
    Range(String),

    /// Rank-deficient design matrix; carries the condition diagnostic.
    #[error("singular design (condition {condition:.3e}): {detail}")]
    Singular { condition: f64, detail: String },

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
