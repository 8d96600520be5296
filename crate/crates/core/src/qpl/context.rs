//! Typing contexts: ordered bits and qubits.

use std::fmt;

use crate::domain::Signature;
use crate::qpl::ast::{Decl, Kind};

/// Variables in significance order: index 0 is the most significant bit
/// among bits and the leftmost tensor factor among qubits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypingContext {
    vars: Vec<(String, Kind)>,
}

impl TypingContext {
    pub fn new(vars: Vec<(String, Kind)>) -> Self {
        TypingContext { vars }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `n` qubits named `{prefix}0 … {prefix}{n-1}`.
    pub fn register(prefix: &str, n: usize) -> Self {
        TypingContext {
            vars: (0..n).map(|k| (format!("{prefix}{k}"), Kind::Qbit)).collect(),
        }
    }

    pub fn from_decls(decls: &[Decl]) -> Self {
        TypingContext {
            vars: decls.iter().map(|d| (d.name.clone(), d.kind)).collect(),
        }
    }

    pub fn vars(&self) -> &[(String, Kind)] {
        &self.vars
    }

    pub fn kind_of(&self, name: &str) -> Option<Kind> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, k)| *k)
    }

    fn position(&self, name: &str, kind: Kind) -> Option<usize> {
        self.vars
            .iter()
            .filter(|(_, k)| *k == kind)
            .position(|(n, _)| n == name)
    }

    pub fn bit_position(&self, name: &str) -> Option<usize> {
        self.position(name, Kind::Bit)
    }

    pub fn qubit_position(&self, name: &str) -> Option<usize> {
        self.position(name, Kind::Qbit)
    }

    pub fn bit_count(&self) -> usize {
        self.vars.iter().filter(|(_, k)| *k == Kind::Bit).count()
    }

    pub fn qubit_count(&self) -> usize {
        self.vars.iter().filter(|(_, k)| *k == Kind::Qbit).count()
    }

    /// Context with a fresh most-significant variable.
    pub fn with_front(&self, name: &str, kind: Kind) -> Self {
        let mut vars = Vec::with_capacity(self.vars.len() + 1);
        vars.push((name.to_string(), kind));
        vars.extend(self.vars.iter().cloned());
        TypingContext { vars }
    }

    pub fn without(&self, name: &str) -> Self {
        TypingContext {
            vars: self.vars.iter().filter(|(n, _)| n != name).cloned().collect(),
        }
    }

    /// `2^{#bits}` entries of dimension `2^{#qubits}`.
    pub fn signature(&self) -> Signature {
        Signature::uniform(1 << self.bit_count(), 1 << self.qubit_count())
    }
}

impl fmt::Display for TypingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|(n, k)| format!("{} {n}", k.keyword()))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
