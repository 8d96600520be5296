//! Signature-indexed tuples of matrices: raw operator tuples, density states
//! and predicates.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::signature::Signature;
use super::validation::{codes, ValidationReport};
use crate::eigen::herm_eigen;
use crate::error::{QwpError, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::{Tolerances, EQ_TOL};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleLiteral {
    sig: Signature,
    entries: Vec<ComplexMatrix>,
}

/// Tuple of square matrices shaped by a signature, with no positivity constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TupleLiteral")]
pub struct OperatorTuple {
    sig: Signature,
    entries: Vec<ComplexMatrix>,
}

impl TryFrom<TupleLiteral> for OperatorTuple {
    type Error = QwpError;

    fn try_from(lit: TupleLiteral) -> Result<Self> {
        OperatorTuple::new(lit.sig, lit.entries)
    }
}

impl OperatorTuple {
    pub fn new(sig: Signature, entries: Vec<ComplexMatrix>) -> Result<Self> {
        if entries.len() != sig.len() {
            return Err(QwpError::DimensionMismatch(format!(
                "signature {sig} has {} entries, got {}",
                sig.len(),
                entries.len()
            )));
        }
        for (k, (m, &d)) in entries.iter().zip(sig.dims()).enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(QwpError::DimensionMismatch(format!(
                    "entry {k} must be {d}x{d}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(OperatorTuple { sig, entries })
    }

    pub fn zero(sig: &Signature) -> Self {
        OperatorTuple {
            entries: sig.dims().iter().map(|&d| ComplexMatrix::zeros(d, d)).collect(),
            sig: sig.clone(),
        }
    }

    pub fn identity(sig: &Signature) -> Self {
        OperatorTuple {
            entries: sig.dims().iter().map(|&d| ComplexMatrix::identity(d)).collect(),
            sig: sig.clone(),
        }
    }

    /// Single-entry tuple.
    pub fn single(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(QwpError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(OperatorTuple {
            sig: Signature::single(m.rows()),
            entries: vec![m],
        })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn entries(&self) -> &[ComplexMatrix] {
        &self.entries
    }

    pub fn entry(&self, k: usize) -> &ComplexMatrix {
        &self.entries[k]
    }

    pub fn into_entries(self) -> Vec<ComplexMatrix> {
        self.entries
    }

    /// Tuple concatenation `self ⊕ other`.
    pub fn direct_sum(&self, other: &OperatorTuple) -> OperatorTuple {
        OperatorTuple {
            sig: self.sig.concat(&other.sig),
            entries: self.entries.iter().chain(&other.entries).cloned().collect(),
        }
    }

    /// Entries `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Result<OperatorTuple> {
        Ok(OperatorTuple {
            sig: self.sig.slice(start, end)?,
            entries: self.entries[start..end].to_vec(),
        })
    }

    /// Trace pairing `Σ_k Re tr(self_k · other_k)`.
    pub fn pairing(&self, other: &OperatorTuple) -> Result<f64> {
        self.sig.expect_eq(&other.sig)?;
        let mut acc = 0.0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += a.trace_product(b)?.re;
        }
        Ok(acc)
    }

    pub fn traces(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|m| m.trace().expect("square entry").re)
            .collect()
    }

    pub fn total_trace(&self) -> f64 {
        self.traces().iter().sum()
    }

    /// Largest entrywise distance; infinite for mismatched signatures.
    pub fn max_distance(&self, other: &OperatorTuple) -> f64 {
        if self.sig != other.sig {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_distance(b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &OperatorTuple, tol: f64) -> bool {
        self.max_distance(other) <= tol
    }

    pub fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> OperatorTuple {
        OperatorTuple {
            sig: self.sig.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> OperatorTuple {
        self.map(|m| m.scale_real(c))
    }

    pub fn add(&self, other: &OperatorTuple) -> Result<OperatorTuple> {
        self.sig.expect_eq(&other.sig)?;
        Ok(OperatorTuple {
            sig: self.sig.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.entries.iter().all(|m| m.is_hermitian(tol))
    }
}

/// Hermitian, positive, eigenvalues at most 1 (with `tol.psd` slack).
pub fn validate_predicate_entry(m: &ComplexMatrix, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport::new();
    check_positive_entry(m, tol, &mut report, true);
    report
}

/// Default-tolerance form of [`validate_predicate_entry`].
pub fn is_valid_predicate_entry(m: &ComplexMatrix) -> bool {
    validate_predicate_entry(m, &Tolerances::default()).is_valid()
}

fn check_positive_entry(
    m: &ComplexMatrix,
    tol: &Tolerances,
    report: &mut ValidationReport,
    bounded_by_one: bool,
) {
    if !m.is_square() {
        report.violate(
            codes::SHAPE,
            format!("matrix is {}x{}, not square", m.rows(), m.cols()),
            m.cols() as f64,
        );
        return;
    }
    let dev = m.hermitian_deviation();
    report.check(codes::NOT_HERMITIAN, dev, tol.herm, dev, || {
        format!("not Hermitian (max asymmetry {dev:e})")
    });
    if dev > tol.herm {
        return;
    }
    let eig = herm_eigen(m).expect("checked Hermitian");
    let (lo, hi) = (eig.min(), eig.max());
    report.check(codes::NOT_PSD, -lo, tol.psd, lo, || {
        format!("not positive (min eigenvalue {lo})")
    });
    if bounded_by_one {
        report.check(codes::EIGENVALUE_ABOVE_ONE, hi - 1.0, tol.psd, hi, || {
            format!("max eigenvalue {hi} exceeds 1")
        });
    }
}

fn validate_tuple_shape(t: &OperatorTuple, report: &mut ValidationReport) -> bool {
    // shapes are enforced by OperatorTuple::new; count the check
    report.trials += 1;
    t.entries.len() == t.sig.len()
}

/// State validation: each entry Hermitian and positive, total trace ≤ 1.
pub fn validate_state(t: &OperatorTuple, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport::new();
    if !validate_tuple_shape(t, &mut report) {
        return report;
    }
    for (k, m) in t.entries.iter().enumerate() {
        let mut sub = ValidationReport::new();
        check_positive_entry(m, tol, &mut sub, false);
        report.merge(sub, &format!("entry {k}: "));
    }
    let total = t.total_trace();
    report.check(codes::TRACE_ABOVE_ONE, total - 1.0, tol.trace, total, || {
        format!("total trace {total} exceeds 1")
    });
    report
}

/// Predicate validation: each entry a predicate; no cross-entry constraint.
pub fn validate_predicate(t: &OperatorTuple, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport::new();
    if !validate_tuple_shape(t, &mut report) {
        return report;
    }
    for (k, m) in t.entries.iter().enumerate() {
        let mut sub = ValidationReport::new();
        check_positive_entry(m, tol, &mut sub, true);
        report.merge(sub, &format!("entry {k}: "));
    }
    report
}

macro_rules! validated_tuple {
    ($(#[$meta:meta])* $name:ident, $validate:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "OperatorTuple", into = "OperatorTuple")]
        pub struct $name(OperatorTuple);

        impl $name {
            pub fn new(sig: Signature, entries: Vec<ComplexMatrix>) -> Result<Self> {
                Self::from_tuple(OperatorTuple::new(sig, entries)?)
            }

            pub fn from_tuple(t: OperatorTuple) -> Result<Self> {
                Self::from_tuple_with(t, &Tolerances::default())
            }

            pub fn from_tuple_with(t: OperatorTuple, tol: &Tolerances) -> Result<Self> {
                let report = $validate(&t, tol);
                if report.is_valid() {
                    Ok($name(t))
                } else {
                    Err(QwpError::Validation(report))
                }
            }

            /// Wraps without validation; callers guarantee the invariants.
            #[allow(dead_code)]
            pub(crate) fn trusted(t: OperatorTuple) -> Self {
                $name(t)
            }

            pub fn single(m: ComplexMatrix) -> Result<Self> {
                Self::from_tuple(OperatorTuple::single(m)?)
            }

            pub fn as_tuple(&self) -> &OperatorTuple {
                &self.0
            }

            pub fn into_tuple(self) -> OperatorTuple {
                self.0
            }

            pub fn validate(&self) -> ValidationReport {
                $validate(&self.0, &Tolerances::default())
            }
        }

        impl Deref for $name {
            type Target = OperatorTuple;

            fn deref(&self) -> &OperatorTuple {
                &self.0
            }
        }

        impl TryFrom<OperatorTuple> for $name {
            type Error = QwpError;

            fn try_from(t: OperatorTuple) -> Result<Self> {
                Self::from_tuple(t)
            }
        }

        impl From<$name> for OperatorTuple {
            fn from(v: $name) -> OperatorTuple {
                v.0
            }
        }
    };
}

validated_tuple!(
    /// Tuple of positive matrices with total trace at most 1. Traces below 1
    /// are legitimate: states are never renormalized.
    DensityState,
    validate_state
);

validated_tuple!(
    /// Tuple of predicates: each entry positive with eigenvalues at most 1.
    PredicateTuple,
    validate_predicate
);

impl PredicateTuple {
    pub fn zero(sig: &Signature) -> Self {
        PredicateTuple(OperatorTuple::zero(sig))
    }

    pub fn identity(sig: &Signature) -> Self {
        PredicateTuple(OperatorTuple::identity(sig))
    }

    /// Entrywise direct sum `M₁ ⊕ M₂`.
    pub fn direct_sum(&self, other: &PredicateTuple) -> PredicateTuple {
        PredicateTuple(self.0.direct_sum(&other.0))
    }
}

impl DensityState {
    pub fn direct_sum(&self, other: &DensityState) -> Result<DensityState> {
        DensityState::from_tuple(self.0.direct_sum(&other.0))
    }
}

/// Expected value `Σ_k Re tr(P_k ρ_k)` of a predicate in a state.
pub fn expectation(s: &DensityState, p: &PredicateTuple) -> Result<f64> {
    p.sig().expect_eq(s.sig())?;
    s.pairing(p)
}

/// Quantitative satisfaction `ρ ⊨_r P`: `expectation ≥ r − 1e-9`.
///
/// `r` is compared against the raw (unnormalized) expectation.
pub fn satisfies(s: &DensityState, p: &PredicateTuple, r: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&r) {
        return Err(QwpError::InvalidThreshold(r));
    }
    Ok(expectation(s, p)? >= r - EQ_TOL)
}
