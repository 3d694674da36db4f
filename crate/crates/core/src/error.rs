use thiserror::Error;

/// Errors raised by the library.
///
/// Invalid-input variants map to CLI exit code 1; `NonInteger` and
/// `Consistency` indicate an internal arithmetic or construction fault and
/// map to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible roots of unity: order {0} vs order {1}")]
    OrderMismatch(usize, usize),
    #[error("cyclotomic element is not a rational integer")]
    NonInteger,
    #[error("polynomial variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: i64, modulus: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("degenerate image: {0}")]
    Degenerate(String),
    #[error("arrangement contains duplicate lines ({0} and {1})")]
    DuplicateLines(usize, usize),
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::NonInteger | Error::Consistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
