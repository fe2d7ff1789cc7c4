use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Arithmetic outside the domain of an operation (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("vector is not in the transposition class: {0}")]
    NotInClass(String),

    #[error("invalid quotient: {0}")]
    InvalidQuotient(String),

    #[error("degenerate space: {0}")]
    Degenerate(String),

    #[error("element order exceeds cap {cap}")]
    OrderCapExceeded { cap: u32 },

    #[error("search incomplete: node budget {budget} exhausted")]
    IncompleteSearch { budget: u64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// A property guaranteed by theory did not hold; indicates a bug or a
    /// violated precondition upstream.
    #[error("contract failure: {0}")]
    Contract(String),

    #[error("check `{clause}` failed: {detail}")]
    CheckFailed { clause: String, detail: String },
}
