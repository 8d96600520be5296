//! Failure classes and their exit codes. Every error prints one JSON body.

use serde::Serialize;

use qwp_core::QwpError;

pub mod exit {
    pub const OK: i32 = 0;
    /// `check` ran and the verdict is fail.
    pub const VERDICT_FAIL: i32 = 1;
    pub const SYNTAX: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const NON_CONVERGENT: i32 = 4;
    pub const INVALID_THRESHOLD: i32 = 5;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<String>>,
    /// Validation report behind a failed input check, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<qwp_core::domain::ValidationReport>,
}

/// `{"error": {...}}`
#[derive(Debug, Serialize)]
pub struct ErrorBody<'a> {
    pub error: &'a CliError,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>, exit_code: i32) -> Self {
        CliError {
            kind: kind.into(),
            message: message.into(),
            exit_code,
            line: None,
            col: None,
            expected: None,
            report: None,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new("UsageError", message, exit::USAGE)
    }

    pub fn input(path: &std::path::Path, message: impl std::fmt::Display) -> Self {
        Self::new("InvalidInput", format!("{}: {message}", path.display()), exit::VALIDATION)
    }

    pub fn response(&self) -> crate::Response {
        let mut stdout = serde_json::to_string_pretty(&ErrorBody { error: self }).expect("serializable");
        stdout.push('\n');
        crate::Response {
            code: self.exit_code,
            stdout,
        }
    }
}

impl From<QwpError> for CliError {
    fn from(e: QwpError) -> Self {
        let code = match &e {
            QwpError::Syntax { .. }
            | QwpError::Scope { .. }
            | QwpError::Type(_)
            | QwpError::Elaboration(_) => exit::SYNTAX,
            QwpError::NonConvergent { .. } | QwpError::NonMonotone { .. } => exit::NON_CONVERGENT,
            QwpError::InvalidThreshold(_) => exit::INVALID_THRESHOLD,
            QwpError::InvalidTolerance(_) => exit::USAGE,
            _ => exit::VALIDATION,
        };
        let mut out = CliError::new(e.kind(), e.to_string(), code);
        match e {
            QwpError::Syntax { line, col, expected, .. } => {
                out.line = Some(line);
                out.col = Some(col);
                out.expected = Some(expected);
            }
            QwpError::Scope { line, col, .. } => {
                out.line = Some(line);
                out.col = Some(col);
            }
            QwpError::Validation(report) => out.report = Some(report),
            _ => {}
        }
        out
    }
}
