use thiserror::Error;

/// Failure modes shared by every analysis in the crate.
///
/// Variants split into two families: operational problems with the input
/// (bad numbers, malformed specs, out-of-range indices) and mathematical
/// refusals where a theorem's hypothesis is not met. Callers that sweep
/// parameter grids use [`Error::is_hypothesis_violation`] to tell them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid spec: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),

    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("outside theorem range: {0}")]
    OutOfTheoremRange(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

impl Error {
    /// True when the error means "the mathematics says no" rather than
    /// "the input could not be processed".
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::DomainViolation(_) | Error::HypothesisViolation(_) | Error::OutOfTheoremRange(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
