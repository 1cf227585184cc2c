//! CLI error type and its machine-readable rendering.
//!
//! Every failure exits nonzero after printing a single JSON object to
//! stderr: `{"schema": "realgame/1", "error": {"kind": …, "message": …}}`.

use std::fmt;

use crate::json::{Json, ObjBuilder};

/// Failure category, stable across releases so scripts can dispatch on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad flag value or flag combination.
    InvalidArgument,
    /// File read/write failure.
    Io,
    /// Malformed input file (CSV or JSON).
    Parse,
    /// Numerical routine reported a domain or convergence problem.
    Compute,
    /// `--verify` found a saved artifact inconsistent with recomputation.
    VerifyFailed,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::InvalidArgument => "invalid-argument",
            ErrorKind::Io => "io",
            ErrorKind::Parse => "parse",
            ErrorKind::Compute => "compute",
            ErrorKind::VerifyFailed => "verify-failed",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::InvalidArgument, message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Parse, message)
    }

    pub fn verify(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::VerifyFailed, message)
    }

    pub fn io(context: &str, err: std::io::Error) -> Self {
        Self::new(ErrorKind::Io, format!("{context}: {err}"))
    }

    /// The stderr document.
    pub fn to_json(&self) -> Json {
        ObjBuilder::new()
            .field("schema", Json::str(crate::SCHEMA))
            .field(
                "error",
                ObjBuilder::new()
                    .field("kind", Json::str(self.kind.as_str()))
                    .field("message", Json::str(self.message.clone()))
                    .build(),
            )
            .build()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<realgame_core::Error> for CliError {
    fn from(e: realgame_core::Error) -> Self {
        Self::new(ErrorKind::Compute, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::parse(format!("invalid JSON: {e}"))
    }
}
