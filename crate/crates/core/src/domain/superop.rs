//! Block superoperators between signature-indexed tuples.

use serde::{Deserialize, Serialize};

use super::channel::KrausChannel;
use super::signature::Signature;
use super::tuple::{DensityState, OperatorTuple};
use super::validation::{codes, ValidationReport};
use crate::eigen::herm_eigen;
use crate::error::{QwpError, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuperoperatorLiteral {
    in_sig: Signature,
    out_sig: Signature,
    blocks: Vec<Vec<KrausChannel>>,
}

/// Tuple-valued map, `out_j = Σ_i block[j][i](ρ_i)`, with every block a
/// Kraus channel from `in_sig[i]` to `out_sig[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SuperoperatorLiteral", into = "SuperoperatorLiteral")]
pub struct Superoperator {
    in_sig: Signature,
    out_sig: Signature,
    blocks: Vec<Vec<KrausChannel>>,
}

impl TryFrom<SuperoperatorLiteral> for Superoperator {
    type Error = QwpError;

    fn try_from(lit: SuperoperatorLiteral) -> Result<Self> {
        Superoperator::new(lit.in_sig, lit.out_sig, lit.blocks)
    }
}

impl From<Superoperator> for SuperoperatorLiteral {
    fn from(s: Superoperator) -> Self {
        SuperoperatorLiteral {
            in_sig: s.in_sig,
            out_sig: s.out_sig,
            blocks: s.blocks,
        }
    }
}

impl Superoperator {
    pub fn new(in_sig: Signature, out_sig: Signature, blocks: Vec<Vec<KrausChannel>>) -> Result<Self> {
        if blocks.len() != out_sig.len() {
            return Err(QwpError::DimensionMismatch(format!(
                "{} block rows for output signature {out_sig}",
                blocks.len()
            )));
        }
        for (j, row) in blocks.iter().enumerate() {
            if row.len() != in_sig.len() {
                return Err(QwpError::DimensionMismatch(format!(
                    "block row {j} has {} entries for input signature {in_sig}",
                    row.len()
                )));
            }
            for (i, c) in row.iter().enumerate() {
                if c.in_dim() != in_sig.dim(i) || c.out_dim() != out_sig.dim(j) {
                    return Err(QwpError::DimensionMismatch(format!(
                        "block [{j}][{i}] maps {}→{}, expected {}→{}",
                        c.in_dim(),
                        c.out_dim(),
                        in_sig.dim(i),
                        out_sig.dim(j)
                    )));
                }
            }
        }
        Ok(Superoperator {
            in_sig,
            out_sig,
            blocks,
        })
    }

    /// Builds every block from `f(j, i)`; `f` must respect the signature dimensions.
    pub fn from_fn(
        in_sig: &Signature,
        out_sig: &Signature,
        mut f: impl FnMut(usize, usize) -> KrausChannel,
    ) -> Result<Self> {
        let blocks = (0..out_sig.len())
            .map(|j| (0..in_sig.len()).map(|i| f(j, i)).collect())
            .collect();
        Self::new(in_sig.clone(), out_sig.clone(), blocks)
    }

    pub fn zero(in_sig: &Signature, out_sig: &Signature) -> Self {
        Self::from_fn(in_sig, out_sig, |j, i| {
            KrausChannel::zero(in_sig.dim(i), out_sig.dim(j))
        })
        .expect("zero blocks fit any signature")
    }

    pub fn identity(sig: &Signature) -> Self {
        Self::from_fn(sig, sig, |j, i| {
            if i == j {
                KrausChannel::identity(sig.dim(i))
            } else {
                KrausChannel::zero(sig.dim(i), sig.dim(j))
            }
        })
        .expect("identity blocks fit")
    }

    /// One-entry superoperator wrapping a channel.
    pub fn from_channel(c: KrausChannel) -> Self {
        Superoperator {
            in_sig: Signature::single(c.in_dim()),
            out_sig: Signature::single(c.out_dim()),
            blocks: vec![vec![c]],
        }
    }

    /// Block-diagonal superoperator with one channel per entry.
    pub fn diagonal(channels: Vec<KrausChannel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(QwpError::InvalidSignature("no diagonal channels".into()));
        }
        let in_sig = Signature::new(channels.iter().map(KrausChannel::in_dim).collect())?;
        let out_sig = Signature::new(channels.iter().map(KrausChannel::out_dim).collect())?;
        Self::from_fn(&in_sig, &out_sig, |j, i| {
            if i == j {
                channels[i].clone()
            } else {
                KrausChannel::zero(in_sig.dim(i), out_sig.dim(j))
            }
        })
    }

    pub fn in_sig(&self) -> &Signature {
        &self.in_sig
    }

    pub fn out_sig(&self) -> &Signature {
        &self.out_sig
    }

    pub fn block(&self, j: usize, i: usize) -> &KrausChannel {
        &self.blocks[j][i]
    }

    pub fn blocks(&self) -> &[Vec<KrausChannel>] {
        &self.blocks
    }

    /// Total number of Kraus operators across blocks.
    pub fn kraus_count(&self) -> usize {
        self.blocks.iter().flatten().map(|c| c.kraus().len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(KrausChannel::is_zero)
    }

    /// Per input entry `i`: `Σ_j Σ_k E†E ≼ I` over column `i`.
    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        let mut report = ValidationReport::new();
        for i in 0..self.in_sig.len() {
            let d = self.in_sig.dim(i);
            let mut gram = ComplexMatrix::zeros(d, d);
            for row in &self.blocks {
                gram = &gram + &row[i].gram();
            }
            let hi = herm_eigen(&gram).expect("Gram matrix is Hermitian").max();
            report.check(codes::TRACE_INCREASING, hi - 1.0, tol.psd, hi, || {
                format!("input entry {i}: Σ E†E has eigenvalue {hi} > 1")
            });
        }
        report
    }

    /// Forward action on an arbitrary operator tuple.
    pub fn apply_tuple(&self, t: &OperatorTuple) -> Result<OperatorTuple> {
        self.in_sig.expect_eq(t.sig())?;
        let mut out = Vec::with_capacity(self.out_sig.len());
        for (j, row) in self.blocks.iter().enumerate() {
            let d = self.out_sig.dim(j);
            let mut acc = ComplexMatrix::zeros(d, d);
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &c.apply(t.entry(i))?;
                }
            }
            out.push(acc);
        }
        OperatorTuple::new(self.out_sig.clone(), out)
    }

    /// Forward semantics on states. The output is validated; for a valid
    /// superoperator it always passes.
    pub fn apply(&self, s: &DensityState) -> Result<DensityState> {
        DensityState::from_tuple(self.apply_tuple(s)?)
    }

    /// Max-norm distance between blockwise Choi matrices.
    pub fn choi_distance(&self, other: &Superoperator) -> f64 {
        if self.in_sig != other.in_sig || self.out_sig != other.out_sig {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| a.choi_distance(b))
            .fold(0.0, f64::max)
    }

    /// Largest Choi entry over all blocks.
    pub fn choi_max_norm(&self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .map(|c| if c.is_zero() { 0.0 } else { c.choi().max_abs() })
            .fold(0.0, f64::max)
    }

    /// Sum of maps with identical signatures.
    pub fn sum(&self, other: &Superoperator) -> Result<Superoperator> {
        self.in_sig.expect_eq(&other.in_sig)?;
        self.out_sig.expect_eq(&other.out_sig)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.sum(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Superoperator {
            in_sig: self.in_sig.clone(),
            out_sig: self.out_sig.clone(),
            blocks,
        })
    }

    /// The map scaled by `p ≥ 0`.
    pub fn scaled(&self, p: f64) -> Result<Superoperator> {
        let blocks = self
            .blocks
            .iter()
            .map(|r| r.iter().map(|c| c.scaled(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Superoperator {
            in_sig: self.in_sig.clone(),
            out_sig: self.out_sig.clone(),
            blocks,
        })
    }

    /// Every block compressed to at most `in·out` Kraus operators.
    pub fn compressed(&self) -> Superoperator {
        Superoperator {
            in_sig: self.in_sig.clone(),
            out_sig: self.out_sig.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|r| r.iter().map(KrausChannel::compressed).collect())
                .collect(),
        }
    }

    /// Sub-map from input entries `ins` to output entries `outs`.
    pub fn restrict(
        &self,
        outs: std::ops::Range<usize>,
        ins: std::ops::Range<usize>,
    ) -> Result<Superoperator> {
        let out_sig = self.out_sig.slice(outs.start, outs.end)?;
        let in_sig = self.in_sig.slice(ins.start, ins.end)?;
        let blocks = self.blocks[outs]
            .iter()
            .map(|r| r[ins.clone()].to_vec())
            .collect();
        Superoperator::new(in_sig, out_sig, blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::consts::*;

    /// One-qubit measurement `ρ ↦ P₀ρP₀ ⊕ P₁ρP₁`.
    fn measure() -> Superoperator {
        Superoperator::new(
            Signature::single(2),
            Signature::uniform(2, 2),
            vec![
                vec![KrausChannel::single(proj0())],
                vec![KrausChannel::single(proj1())],
            ],
        )
        .unwrap()
    }

    #[test]
    fn apply_measurement() {
        let s = DensityState::single(proj_plus()).unwrap();
        let out = measure().apply(&s).unwrap();
        assert_eq!(out.sig().dims(), &[2, 2]);
        assert!(out.entry(0).max_distance(&ComplexMatrix::diag_real(&[0.5, 0.0])) < 1e-15);
        assert!(out.entry(1).max_distance(&ComplexMatrix::diag_real(&[0.0, 0.5])) < 1e-15);
    }

    #[test]
    fn apply_identity_and_mismatch() {
        let sig = Signature::new(vec![2, 1]).unwrap();
        let s = DensityState::new(
            sig.clone(),
            vec![proj_plus().scale_real(0.5), ComplexMatrix::diag_real(&[0.25])],
        )
        .unwrap();
        assert_eq!(Superoperator::identity(&sig).apply(&s).unwrap(), s);
        assert!(matches!(
            measure().apply(&s),
            Err(QwpError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn validate_columns() {
        assert!(measure().validate(&Tolerances::default()).is_valid());
        let doubled = Superoperator::new(
            Signature::single(2),
            Signature::uniform(2, 2),
            vec![
                vec![KrausChannel::identity(2)],
                vec![KrausChannel::identity(2)],
            ],
        )
        .unwrap();
        let r = doubled.validate(&Tolerances::default());
        assert!(!r.is_valid());
        assert!((r.violations[0].witness - 2.0).abs() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let r = Superoperator::new(
            Signature::single(2),
            Signature::single(2),
            vec![vec![KrausChannel::identity(3)]],
        );
        assert!(r.is_err());
        let r = Superoperator::new(Signature::single(2), Signature::single(2), vec![]);
        assert!(r.is_err());
    }

    #[test]
    fn wire_format_round_trip() {
        let m = measure();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.starts_with(r#"{"in_sig":[2],"out_sig":[2,2],"blocks":[[{"in":2"#));
        let back: Superoperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn restrict_extracts_blocks() {
        let m = measure();
        let lower = m.restrict(1..2, 0..1).unwrap();
        assert_eq!(lower.block(0, 0), &KrausChannel::single(proj1()));
        assert!(m.restrict(1..3, 0..1).is_err());
    }
}
