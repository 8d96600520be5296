use std::fmt;

use serde::{Deserialize, Serialize};

/// One violated invariant with its numeric witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: String,
    pub message: String,
    pub witness: f64,
}

/// Report-style validation result. `pass` is true iff there are no violations.
///
/// `max_residual` is the largest amount by which any checked quantity exceeded
/// its exact bound (before tolerance slack); `trials` counts the checks made.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub max_residual: f64,
    pub trials: usize,
    pub violations: Vec<Violation>,
}

pub mod codes {
    pub const SHAPE: &str = "shape_mismatch";
    pub const NOT_HERMITIAN: &str = "not_hermitian";
    pub const NOT_PSD: &str = "not_psd";
    pub const EIGENVALUE_ABOVE_ONE: &str = "eigenvalue_above_one";
    pub const TRACE_ABOVE_ONE: &str = "trace_above_one";
    pub const TRACE_INCREASING: &str = "trace_increasing";
}

impl Default for ValidationReport {
    fn default() -> Self {
        ValidationReport {
            pass: true,
            max_residual: 0.0,
            trials: 0,
            violations: Vec::new(),
        }
    }
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records one check: `excess` is the amount past the exact bound; it is a
    /// violation when larger than `slack`, reported with `witness` (the
    /// offending measured value).
    pub(crate) fn check(
        &mut self,
        code: &str,
        excess: f64,
        slack: f64,
        witness: f64,
        message: impl FnOnce() -> String,
    ) {
        self.trials += 1;
        if excess > self.max_residual {
            self.max_residual = excess;
        }
        if !(excess <= slack) {
            self.violate(code, message(), witness);
        }
    }

    pub(crate) fn violate(&mut self, code: &str, message: String, witness: f64) {
        self.pass = false;
        self.violations.push(Violation {
            code: code.to_string(),
            message,
            witness,
        });
    }

    pub(crate) fn merge(&mut self, other: ValidationReport, prefix: &str) {
        self.trials += other.trials;
        self.max_residual = self.max_residual.max(other.max_residual);
        for v in other.violations {
            self.violate(&v.code, format!("{prefix}{}", v.message), v.witness);
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let msgs: Vec<&str> = self.violations.iter().map(|v| v.message.as_str()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}
