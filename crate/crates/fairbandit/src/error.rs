//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: expected {expected} entries, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// The fairness set is empty; no distribution satisfies all bounds.
    #[error("fairness set is empty")]
    Infeasible,

    /// A combinatorial scan was refused because the input exceeds the
    /// configured desk-scale cap.
    #[error("{what} size {actual} exceeds the supported cap of {cap}")]
    CapacityExceeded {
        what: &'static str,
        cap: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("config parse error: {0}")]
    ConfigSyntax(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: 2 config, 3 infeasible, 4 other.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config { .. } | Error::ConfigSyntax(_) => 2,
            Error::Infeasible => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
