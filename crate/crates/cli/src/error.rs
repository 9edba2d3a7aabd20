use std::fmt;

use serde::Serialize;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const INDETERMINATE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const VIOLATION: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Validation,
    Indeterminate,
    Io,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Io,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => exit::VALIDATION,
            ErrorKind::Indeterminate => exit::INDETERMINATE,
            ErrorKind::Io => exit::IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<orlicz_gauge::Error> for CliError {
    fn from(e: orlicz_gauge::Error) -> Self {
        use orlicz_gauge::Error as E;
        let kind = match e {
            E::Indeterminate(_) | E::NonFinite(_) | E::NotInSpace => ErrorKind::Indeterminate,
            _ => ErrorKind::Validation,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}
