//! Kraus-form channels between two matrix spaces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::validation::{codes, ValidationReport};
use crate::eigen::herm_eigen;
use crate::error::{QwpError, Result};
use crate::matrix::{ComplexMatrix, ZERO};
use crate::tolerance::Tolerances;

/// Relative eigenvalue cutoff used when rebuilding a Kraus list from a Choi matrix.
const COMPRESS_CUTOFF: f64 = 1e-15;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelLiteral {
    #[serde(rename = "in")]
    in_dim: usize,
    #[serde(rename = "out")]
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

/// `ρ ↦ Σ_k E_k ρ E_k†` with each `E_k` an `out_dim × in_dim` matrix.
/// The empty list is the zero map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelLiteral", into = "ChannelLiteral")]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl TryFrom<ChannelLiteral> for KrausChannel {
    type Error = QwpError;

    fn try_from(lit: ChannelLiteral) -> Result<Self> {
        KrausChannel::new(lit.in_dim, lit.out_dim, lit.kraus)
    }
}

impl From<KrausChannel> for ChannelLiteral {
    fn from(c: KrausChannel) -> Self {
        ChannelLiteral {
            in_dim: c.in_dim,
            out_dim: c.out_dim,
            kraus: c.kraus,
        }
    }
}

impl KrausChannel {
    pub fn new(in_dim: usize, out_dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 {
            return Err(QwpError::DimensionMismatch(
                "channel dimensions must be positive".into(),
            ));
        }
        for (k, e) in kraus.iter().enumerate() {
            if e.rows() != out_dim || e.cols() != in_dim {
                return Err(QwpError::DimensionMismatch(format!(
                    "Kraus operator {k} is {}x{}, expected {out_dim}x{in_dim}",
                    e.rows(),
                    e.cols()
                )));
            }
        }
        Ok(KrausChannel {
            in_dim,
            out_dim,
            kraus,
        })
    }

    /// Channel from a nonempty list of same-shaped operators.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| QwpError::DimensionMismatch("empty Kraus list".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        Self::new(in_dim, out_dim, kraus)
    }

    pub fn single(e: ComplexMatrix) -> Self {
        KrausChannel {
            in_dim: e.cols(),
            out_dim: e.rows(),
            kraus: vec![e],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::single(ComplexMatrix::identity(d))
    }

    pub fn zero(in_dim: usize, out_dim: usize) -> Self {
        assert!(in_dim > 0 && out_dim > 0, "channel dimensions must be positive");
        KrausChannel {
            in_dim,
            out_dim,
            kraus: Vec::new(),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// True when the Kraus list is empty (the zero map).
    pub fn is_zero(&self) -> bool {
        self.kraus.is_empty()
    }

    /// `Σ E†E`.
    pub fn gram(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for e in &self.kraus {
            acc = &acc + &(&e.adjoint() * e);
        }
        acc
    }

    /// Reports the trace-nonincreasing condition `Σ E†E ≼ I`.
    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        let mut report = ValidationReport::new();
        let hi = herm_eigen(&self.gram())
            .expect("Gram matrix is Hermitian")
            .max();
        report.check(codes::TRACE_INCREASING, hi - 1.0, tol.psd, hi, || {
            format!("Σ E†E has eigenvalue {hi} > 1")
        });
        report
    }

    fn check_input(&self, rho: &ComplexMatrix, dim: usize, what: &str) -> Result<()> {
        if rho.rows() != dim || rho.cols() != dim {
            return Err(QwpError::DimensionMismatch(format!(
                "{what} is {}x{}, channel expects {dim}x{dim}",
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(())
    }

    /// Forward action `Σ E ρ E†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(rho, self.in_dim, "state")?;
        let mut acc = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for e in &self.kraus {
            acc = &acc + &(&(e * rho) * &e.adjoint());
        }
        Ok(acc)
    }

    /// Adjoint action `Σ E† N E`, defined on any operator `N`.
    pub fn apply_adjoint(&self, n: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(n, self.out_dim, "operator")?;
        let mut acc = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for e in &self.kraus {
            acc = &acc + &(&(&e.adjoint() * n) * e);
        }
        Ok(acc)
    }

    /// Choi matrix `Σ_{a,b} |a⟩⟨b| ⊗ Σ_k E_k|a⟩⟨b|E_k†`, of size `in·out`.
    pub fn choi(&self) -> ComplexMatrix {
        choi_of(&self.kraus, self.in_dim, self.out_dim)
    }

    /// Sequential composition: `self` first, then `next`. Kraus operators are
    /// all products `G_b · E_a`; exactly-zero products are dropped.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        if self.out_dim != next.in_dim {
            return Err(QwpError::DimensionMismatch(format!(
                "cannot follow a channel into dimension {} with one from dimension {}",
                self.out_dim, next.in_dim
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for g in &next.kraus {
            for e in &self.kraus {
                let p = g * e;
                if !p.is_zero() {
                    kraus.push(p);
                }
            }
        }
        Ok(KrausChannel {
            in_dim: self.in_dim,
            out_dim: next.out_dim,
            kraus,
        })
    }

    /// Sum of maps: concatenated Kraus lists.
    pub fn sum(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.in_dim != other.in_dim || self.out_dim != other.out_dim {
            return Err(QwpError::DimensionMismatch(format!(
                "sum of {}→{} and {}→{} channels",
                self.in_dim, self.out_dim, other.in_dim, other.out_dim
            )));
        }
        Ok(KrausChannel {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            kraus: self.kraus.iter().chain(&other.kraus).cloned().collect(),
        })
    }

    /// The map scaled by `p ≥ 0` (each Kraus operator by `√p`).
    pub fn scaled(&self, p: f64) -> Result<KrausChannel> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(QwpError::InvalidMatrix(format!(
                "channel weight {p} must be finite and nonnegative"
            )));
        }
        let s = p.sqrt();
        Ok(KrausChannel {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            kraus: if p == 0.0 {
                Vec::new()
            } else {
                self.kraus.iter().map(|e| e.scale_real(s)).collect()
            },
        })
    }

    /// `I_d ⊗ E` for each Kraus operator: a fresh `d`-level system in front.
    pub fn lift_front(&self, d: usize) -> KrausChannel {
        let id = ComplexMatrix::identity(d);
        KrausChannel {
            in_dim: self.in_dim * d,
            out_dim: self.out_dim * d,
            kraus: self.kraus.iter().map(|e| id.tensor(e)).collect(),
        }
    }

    /// Same map with at most `in·out` Kraus operators, rebuilt from the Choi
    /// eigendecomposition. Lists already within that bound are returned as is.
    pub fn compressed(&self) -> KrausChannel {
        if self.kraus.len() <= self.in_dim * self.out_dim {
            return self.clone();
        }
        self.canonical()
    }

    /// Kraus list from the Choi eigendecomposition.
    pub fn canonical(&self) -> KrausChannel {
        let choi = self.choi();
        let eig = herm_eigen(&choi).expect("Choi matrix is Hermitian");
        let top = eig.max().max(0.0);
        let (din, dout) = (self.in_dim, self.out_dim);
        let mut kraus = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate().rev() {
            if lambda <= top * COMPRESS_CUTOFF || lambda <= 0.0 {
                continue;
            }
            let s = lambda.sqrt();
            let v = &eig.eigenvectors;
            kraus.push(ComplexMatrix::from_fn(dout, din, |r, a| {
                v.get(a * dout + r, k) * s
            }));
        }
        KrausChannel {
            in_dim: din,
            out_dim: dout,
            kraus,
        }
    }

    /// Max-norm distance between Choi matrices; infinite for mismatched shapes.
    pub fn choi_distance(&self, other: &KrausChannel) -> f64 {
        if self.in_dim != other.in_dim || self.out_dim != other.out_dim {
            return f64::INFINITY;
        }
        self.choi().max_distance(&other.choi())
    }
}

pub(crate) fn choi_of(kraus: &[ComplexMatrix], in_dim: usize, out_dim: usize) -> ComplexMatrix {
    let n = in_dim * out_dim;
    let mut data = vec![ZERO; n * n];
    for e in kraus {
        // vec(E)[a·out + r] = E[r, a]
        let v: Vec<Complex64> = (0..n).map(|i| e.get(i % out_dim, i / out_dim)).collect();
        for i in 0..n {
            if v[i] == ZERO {
                continue;
            }
            for j in 0..n {
                data[i * n + j] += v[i] * v[j].conj();
            }
        }
    }
    ComplexMatrix::new(n, n, data).expect("finite Choi entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::is_psd;
    use crate::matrix::consts::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn validate_examples() {
        assert!(KrausChannel::single(hadamard()).validate(&tol()).is_valid());
        let proj = KrausChannel::from_kraus(vec![proj0(), proj1()]).unwrap();
        assert!(proj.validate(&tol()).is_valid());
        let r = KrausChannel::single(ComplexMatrix::identity(2).scale_real(2f64.sqrt()))
            .validate(&tol());
        assert!(!r.is_valid());
        assert!((r.violations[0].witness - 2.0).abs() < 1e-12);
        assert!(KrausChannel::zero(3, 2).validate(&tol()).is_valid());
    }

    #[test]
    fn shape_checks() {
        assert!(KrausChannel::new(2, 2, vec![ComplexMatrix::identity(3)]).is_err());
        assert!(KrausChannel::from_kraus(vec![]).is_err());
        let e = ComplexMatrix::zeros(4, 2);
        let c = KrausChannel::single(e);
        assert_eq!((c.in_dim(), c.out_dim()), (2, 4));
        assert!(c.apply(&ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn apply_examples() {
        let rho = proj_plus();
        assert_eq!(KrausChannel::identity(2).apply(&rho).unwrap(), rho);
        let proj = KrausChannel::from_kraus(vec![proj0(), proj1()]).unwrap();
        let out = proj.apply(&rho).unwrap();
        assert!(out.max_distance(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert!(KrausChannel::zero(2, 2).apply(&rho).unwrap().is_zero());
    }

    #[test]
    fn choi_of_identity() {
        let c = KrausChannel::identity(2).choi();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if [0, 3].contains(&i) && [0, 3].contains(&j) { 1.0 } else { 0.0 };
                assert_eq!(c.get(i, j).re, expected, "({i},{j})");
                assert_eq!(c.get(i, j).im, 0.0);
            }
        }
        assert!(KrausChannel::zero(2, 3).choi().is_zero());
        assert_eq!(KrausChannel::zero(2, 3).choi().rows(), 6);
    }

    #[test]
    fn choi_of_bit_flip() {
        // Σ_{ab} |a⟩⟨b| ⊗ X|a⟩⟨b|X = Σ |a⟩⟨b| ⊗ |1−a⟩⟨1−b|: ones at (1,1),(1,2),(2,1),(2,2)
        let c = KrausChannel::single(pauli_x()).choi();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if [1, 2].contains(&i) && [1, 2].contains(&j) { 1.0 } else { 0.0 };
                assert_eq!(c.get(i, j).re, expected, "({i},{j})");
            }
        }
        // second factor conjugated by X
        let id = KrausChannel::identity(2).choi();
        let ix = ComplexMatrix::identity(2).tensor(&pauli_x());
        assert_eq!(&(&ix * &id) * &ix, c);
    }

    #[test]
    fn compression_preserves_the_map() {
        let h = KrausChannel::single(hadamard());
        let proj = KrausChannel::from_kraus(vec![proj0(), proj1()]).unwrap();
        let mut c = proj.clone();
        for _ in 0..4 {
            c = c.then(&h).unwrap().then(&proj).unwrap();
        }
        let small = c.compressed();
        assert!(small.kraus().len() <= 4);
        assert!(c.choi_distance(&small) < 1e-13);
        assert!(is_psd(&small.choi(), 1e-12).unwrap());
    }

    #[test]
    fn composition_order() {
        // X first then P0: P0 X maps |1⟩ to |0⟩
        let c = KrausChannel::single(pauli_x())
            .then(&KrausChannel::single(proj0()))
            .unwrap();
        let out = c.apply(&proj1()).unwrap();
        assert!(out.max_distance(&proj0()) < 1e-15);
        // orthogonal products vanish
        let z = KrausChannel::single(proj0())
            .then(&KrausChannel::single(proj1()))
            .unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn wire_format() {
        let json = r#"{"in":1,"out":1,"kraus":[{"rows":1,"cols":1,"entries":[[1.0,0.0]]}]}"#;
        let c: KrausChannel = serde_json::from_str(json).unwrap();
        assert_eq!(c, KrausChannel::identity(1));
        assert_eq!(serde_json::to_string(&c).unwrap(), json);
        let bad = r#"{"in":2,"out":1,"kraus":[{"rows":1,"cols":1,"entries":[[1.0,0.0]]}]}"#;
        assert!(serde_json::from_str::<KrausChannel>(bad).is_err());
    }
}
