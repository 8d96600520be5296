use thiserror::Error;

use crate::domain::ValidationReport;

/// Errors produced by the engine and the front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QwpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch { expected: String, found: String },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid predicate: {0}")]
    InvalidPredicate(String),

    #[error("validation failed: {0}")]
    Validation(ValidationReport),

    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("iteration did not converge after {iterations} steps (last increment {increment:e})")]
    NonConvergent { iterations: usize, increment: f64 },

    #[error("iterate {iteration} decreased in transformer order (witness eigenvalue {witness:e})")]
    NonMonotone { iteration: usize, witness: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
        expected: Vec<String>,
    },

    #[error("{line}:{col}: scope error: {message}")]
    Scope {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("type error: {0}")]
    Type(String),

    #[error("elaboration error: {0}")]
    Elaboration(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),
}

impl QwpError {
    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            QwpError::DimensionMismatch(_) => "DimensionMismatch",
            QwpError::NotSquare { .. } => "NotSquare",
            QwpError::NotHermitian { .. } => "NotHermitian",
            QwpError::InvalidMatrix(_) => "InvalidMatrix",
            QwpError::SignatureMismatch { .. } => "SignatureMismatch",
            QwpError::InvalidSignature(_) => "InvalidSignature",
            QwpError::InvalidPredicate(_) => "InvalidPredicate",
            QwpError::Validation(_) => "ValidationError",
            QwpError::InvalidThreshold(_) => "InvalidThreshold",
            QwpError::NonConvergent { .. } => "NonConvergent",
            QwpError::NonMonotone { .. } => "NonMonotone",
            QwpError::NotUnitary { .. } => "NotUnitary",
            QwpError::NotNormalized { .. } => "NotNormalized",
            QwpError::InvalidTolerance(_) => "InvalidTolerance",
            QwpError::Syntax { .. } => "SyntaxError",
            QwpError::Scope { .. } => "ScopeError",
            QwpError::Type(_) => "TypeError",
            QwpError::Elaboration(_) => "ElaborationError",
            QwpError::OutOfRange(_) => "OutOfRange",
        }
    }
}

pub type Result<T> = std::result::Result<T, QwpError>;
