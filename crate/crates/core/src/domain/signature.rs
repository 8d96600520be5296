use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QwpError, Result};

/// Ordered list of entry dimensions of a tuple-valued program point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Signature(Vec<usize>);

impl Signature {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(QwpError::InvalidSignature("signature must be nonempty".into()));
        }
        if let Some(k) = dims.iter().position(|&d| d == 0) {
            return Err(QwpError::InvalidSignature(format!(
                "entry {k} has dimension 0"
            )));
        }
        Ok(Signature(dims))
    }

    /// Single entry of dimension `dim`.
    pub fn single(dim: usize) -> Self {
        Signature::new(vec![dim]).expect("positive dimension")
    }

    /// `count` entries of dimension `dim`.
    pub fn uniform(count: usize, dim: usize) -> Self {
        Signature::new(vec![dim; count]).expect("positive count and dimension")
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self, k: usize) -> usize {
        self.0[k]
    }

    /// Coproduct of signatures: concatenation.
    pub fn concat(&self, other: &Signature) -> Signature {
        Signature([self.0.as_slice(), other.0.as_slice()].concat())
    }

    /// Entries `range` as a signature.
    pub fn slice(&self, start: usize, end: usize) -> Result<Signature> {
        if start >= end || end > self.len() {
            return Err(QwpError::InvalidSignature(format!(
                "slice {start}..{end} of {self}"
            )));
        }
        Ok(Signature(self.0[start..end].to_vec()))
    }

    pub(crate) fn expect_eq(&self, found: &Signature) -> Result<()> {
        if self == found {
            Ok(())
        } else {
            Err(QwpError::SignatureMismatch {
                expected: self.to_string(),
                found: found.to_string(),
            })
        }
    }
}

impl TryFrom<Vec<usize>> for Signature {
    type Error = QwpError;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Signature::new(dims)
    }
}

impl From<Signature> for Vec<usize> {
    fn from(s: Signature) -> Vec<usize> {
        s.0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", dims.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_zero() {
        assert!(Signature::new(vec![]).is_err());
        assert!(Signature::new(vec![2, 0]).is_err());
        assert!(serde_json::from_str::<Signature>("[]").is_err());
        let s: Signature = serde_json::from_str("[2, 4]").unwrap();
        assert_eq!(s.dims(), &[2, 4]);
    }

    #[test]
    fn concat_and_slice() {
        let a = Signature::new(vec![2, 4]).unwrap();
        let b = Signature::single(8);
        let c = a.concat(&b);
        assert_eq!(c.dims(), &[2, 4, 8]);
        assert_eq!(c.slice(1, 3).unwrap().dims(), &[4, 8]);
        assert!(c.slice(2, 2).is_err());
        assert_eq!(c.to_string(), "[2, 4, 8]");
    }
}
