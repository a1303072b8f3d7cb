use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic number is not rational")]
    NotRational,
    #[error("matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("operation requires even rank")]
    OddRank,
    #[error("operation requires odd rank")]
    EvenRank,
    #[error("operation requires an odd prime")]
    EvenPrime,
    #[error("power series quotient is not an integer polynomial: {0}")]
    NonIntegralQuotient(String),
    #[error("L-function pole at s = 1 - k with k = 1 and trivial character")]
    PoleAtOne,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("missing index {0} in Fourier table")]
    MissingIndex(String),
    #[error("{0} is not a p-adic unit")]
    NotAUnit(String),
    #[error("{0} is not congruent to 1 mod p")]
    NotOnePlusP(String),
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("interpolation validation failed: {0}")]
    ValidationFailed(String),
    #[error("pole factor {0} not cancelled by B")]
    PoleNotCancelled(String),
}

pub type Result<T> = std::result::Result<T, Error>;
