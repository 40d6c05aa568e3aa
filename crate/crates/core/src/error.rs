//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by parsing, validation, and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (FCIDUMP, CSV, Pauli/circuit files).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Inputs violate a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// Operands live on different qubit or orbital counts.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A dense realization would exceed the configured size cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Parameters describe an unphysical channel or state.
    #[error("unphysical parameters: {0}")]
    Physicality(String),

    /// Missing or inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical routine failed (non-finite objective, degenerate
    /// projection, non-Hermitian input where Hermitian is required).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for input/validation problems,
    /// 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 2,
            _ => 1,
        }
    }
}
