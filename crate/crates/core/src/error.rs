use thiserror::Error;

/// Errors raised across the library.
///
/// The variants line up with the CLI exit codes: parse failures, scene
/// validation failures, capacity limits, and oracle verification failures
/// each get a distinct code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A size limit was exceeded (arity, wire count, ancilla availability).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Inputs contradict each other, e.g. primes that do not cover the on-set.
    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// Textual input could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A scene violates its geometric constraints.
    #[error("invalid scene: {0}")]
    Validation(String),

    /// A synthesized oracle does not reproduce the scene.
    #[error("verification failed: {0}")]
    Verification(String),

    /// A construct has no representation in the requested output format.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
