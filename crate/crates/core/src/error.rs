use thiserror::Error;

/// Errors raised by the verification toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digit stream exhausted: requested {requested} digits, only {available} available")]
    DigitsExhausted { requested: usize, available: usize },

    #[error("invalid digit file: {0}")]
    InvalidDigitFile(String),

    #[error("target {target} not found within the first {bound} digits")]
    NotFoundWithinBound { target: String, bound: usize },

    #[error("precision exhausted at {cap} digits")]
    PrecisionExhausted { cap: usize },

    #[error("hull invariance fails for generator {letter} at h = {h}")]
    NotInvariant { letter: char, h: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed rational {0:?}: expected P/Q")]
    MalformedRational(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
