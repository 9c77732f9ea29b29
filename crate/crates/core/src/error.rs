use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic {0} does not fit below 2^31")]
    CharacteristicTooLarge(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation needs a finite carrier, but the field is infinite")]
    InfiniteCarrier,
    #[error("carrier too large to enumerate")]
    CarrierTooLarge,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
}

/// Precondition failures of the algebraic constructions and engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("side mismatch: {0}")]
    SideMismatch(String),
    #[error("inputs are not degenerate: {0}")]
    NotDegenerate(String),
    #[error("object sets differ: {0}")]
    ObjectSetsDiffer(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
