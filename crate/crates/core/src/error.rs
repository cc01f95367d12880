use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capability error: {0}")]
    Capability(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("acceptance set is empty at level {0}")]
    EmptySet(f64),

    #[error("invalid descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_error(expected: (usize, usize), found: (usize, usize)) -> Error {
    Error::Dimension { expected: format!("{}x{}", expected.0, expected.1), found: format!("{}x{}", found.0, found.1) }
}
