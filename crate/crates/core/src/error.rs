use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be {expected}, got {value}")]
    OutOfRange {
        what: &'static str,
        expected: &'static str,
        value: String,
    },

    #[error("{a} is not a unit modulo {m}; multiplicative order is undefined")]
    NotAUnit { a: String, m: u64 },

    #[error("invalid contraction ratio: {0}")]
    InvalidRatio(String),

    #[error("digit {0} is not prime")]
    NotPrime(u64),

    #[error("digit period must not be empty")]
    EmptyPeriod,

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("frequencies belong to different contraction ratios")]
    RatioMismatch,

    #[error("numerator {a} is divisible by the digit {digit} at level {level}; not a zero")]
    DivisibleNumerator { a: String, digit: u64, level: u64 },

    #[error("digit at level {level} is {actual}, literal says {claimed}")]
    DigitMismatch { level: u64, claimed: u64, actual: u64 },

    #[error("invalid frequency literal {literal:?}: {reason}")]
    Literal { literal: String, reason: String },

    #[error("duplicate family member {0}")]
    DuplicateMember(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("construction requires a constant digit sequence")]
    NonConstantDigits,

    #[error("required precision of {required} bits exceeds the cap of {cap} bits")]
    PrecisionExceeded { required: u64, cap: u64 },

    #[error("tolerance {tol:e} cannot be certified (rounding alone contributes {floor:e})")]
    ToleranceUnattainable { tol: f64, floor: f64 },

    #[error("constructed family failed the bi-zero check at pair ({0}, {1})")]
    ConstructionFailed(String, String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn out_of_range(
    what: &'static str,
    expected: &'static str,
    value: impl ToString,
) -> Error {
    Error::OutOfRange {
        what,
        expected,
        value: value.to_string(),
    }
}
