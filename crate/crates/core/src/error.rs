use thiserror::Error;

/// Every failure the engine reports. Input and configuration problems are kept
/// apart from usage errors so the CLI can map them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (must be below 2^32)")]
    CharacteristicTooLarge(u64),
    #[error("mixed field backends: {0} vs {1}")]
    MixedBackends(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid ring: {0}")]
    Ring(String),
    #[error("invalid polynomial: {0}")]
    Poly(String),
    #[error(
        "f admits no positive x-weights (each <= {max_weight}) making it homogeneous: {reason}; \
         filtration-based analysis of non-homogenizable f is not supported"
    )]
    NotHomogenizable { reason: String, max_weight: u32 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Input, config and usage errors. Everything the CLI reports with exit code 2.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::DivisionByZero | Error::Dimension(_))
    }
}

/// Expression parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos} near `{token}`: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub token: String,
    pub message: String,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
