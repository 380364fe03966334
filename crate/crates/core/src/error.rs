use alloc::string::String;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// A tensor product would exceed the configured dimension cap.
    #[error("capacity error: dimension {requested} exceeds cap {cap}")]
    Capacity { requested: usize, cap: usize },

    /// The construction produced (or would produce) the zero vector.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Exact integer arithmetic ran out of range.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A listing file line could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::Validation(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
