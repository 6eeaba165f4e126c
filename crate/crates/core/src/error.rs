use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),
    #[error("degenerate map: {0}")]
    Degenerate(String),
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("dimension precondition violated: {0}")]
    DimensionPrecondition(String),
    #[error("unsupported shape: {0}")]
    Shape(String),
    #[error("map is not generically finite onto its image (image dimension {image_dim}, expected {expected})")]
    NotGenericallyFinite { image_dim: i64, expected: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("intersection of principal ideals is not principal")]
    NotPrincipal,
    #[error("resolution too short: has length {length}, need {needed}")]
    ResolutionTooShort { length: usize, needed: usize },
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
