use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised when an operation is called outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("residue {element} is out of range for Z_{modulus}")]
    ResidueOutOfRange { element: u32, modulus: u32 },

    #[error("residue {element} appears more than once in a block")]
    DuplicateResidue { element: u32 },

    #[error("entry {value} at index {index} is not +1 or -1")]
    NotBinary { index: usize, value: i32 },

    #[error("sequences must have at least one term")]
    EmptySequence,

    #[error("shift {shift} is out of range for length {len}")]
    ShiftOutOfRange { shift: usize, len: usize },

    #[error("{divisor} does not divide the sequence length {len}")]
    NotADivisor { divisor: usize, len: usize },

    #[error("pair ({x}, {y}) violates x >= y >= 0")]
    InvalidPair { x: i64, y: i64 },

    #[error("{0} is not a normalized feasible D-optimal parameter set")]
    NotFeasible(String),

    #[error("v = {0} must be odd")]
    EvenOrder(u32),

    #[error("v = {0} must be at least 3")]
    OrderTooSmall(u32),

    #[error("parameter sets differ: {0} vs {1}")]
    ParameterMismatch(String, String),

    #[error("expected {expected} base blocks, found {found}")]
    BlockCount { expected: usize, found: usize },

    #[error("matrix of order {order} exceeds the exact determinant limit {limit}; verify the Gram identity instead")]
    DeterminantTooLarge { order: usize, limit: usize },

    #[error("v = {v} exceeds the exhaustive search limit {limit}")]
    ExhaustiveTooLarge { v: u32, limit: u32 },

    #[error("compression factor {m} does not give a valid factorization of v = {v}")]
    InvalidFactorization { v: u32, m: u32 },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
