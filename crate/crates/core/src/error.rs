use thiserror::Error;

/// Errors raised by the certified operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digit {digit} at position {position} is outside 0..={max}")]
    DigitRange { digit: i64, position: usize, max: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    /// A sign or digit could not be certified within the refinement budget.
    #[error("precision exhausted at position {position}")]
    PrecisionExhausted { position: usize },

    /// The sequence is not self-admissible: its shift by `index` exceeds it.
    #[error("sequence is not self-admissible (shift by {index} exceeds it)")]
    Admissibility { index: usize },

    #[error("certification failed: {0}")]
    CertificationFailure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("work budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
