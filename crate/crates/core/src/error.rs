use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HahnError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("closure failure: {0}")]
    ClosureFailure(String),
    #[error("ordinal nesting depth exceeds the cap of {0}")]
    DepthExceeded(usize),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, HahnError>;

impl HahnError {
    pub fn domain(msg: impl Into<String>) -> Self {
        HahnError::Domain(msg.into())
    }

    pub fn closure(msg: impl Into<String>) -> Self {
        HahnError::ClosureFailure(msg.into())
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        HahnError::Precondition(msg.into())
    }
}
