//! Weakest preconditions and predicate transformers.

use crate::domain::{
    codes, validate_predicate, validate_predicate_entry, KrausChannel, OperatorTuple, PredicateTuple,
    Signature, Superoperator, ValidationReport,
};
use crate::eigen::{herm_eigen, loewner_leq};
use crate::error::{QwpError, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::{Tolerances, PSD_TOL};

/// `wp(E)(N) = Σ_m E_m† N E_m` for a predicate entry `N`.
pub fn wp_channel(c: &KrausChannel, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    let tol = Tolerances::default();
    let report = validate_predicate_entry(n, &tol);
    if !report.is_valid() {
        return Err(QwpError::InvalidPredicate(report.to_string()));
    }
    let m = c.apply_adjoint(n)?;
    let report = validate_predicate_entry(&m, &tol);
    if !report.is_valid() {
        return Err(QwpError::InvalidPredicate(format!(
            "precondition is not a predicate ({report}); the channel increases trace"
        )));
    }
    Ok(m)
}

/// Linear extension of the weakest precondition to arbitrary operator
/// tuples: `pre[i] = Σ_j block[j][i]†(N[j])`. No positivity is required,
/// so it also transforms Hermitian observables such as Pauli stabilizers.
pub fn wp_operator(f: &Superoperator, n: &OperatorTuple) -> Result<OperatorTuple> {
    f.out_sig().expect_eq(n.sig())?;
    let mut pre = Vec::with_capacity(f.in_sig().len());
    for i in 0..f.in_sig().len() {
        let d = f.in_sig().dim(i);
        let mut acc = ComplexMatrix::zeros(d, d);
        for j in 0..f.out_sig().len() {
            let c = f.block(j, i);
            if !c.is_zero() {
                acc = &acc + &c.apply_adjoint(n.entry(j))?;
            }
        }
        pre.push(acc);
    }
    OperatorTuple::new(f.in_sig().clone(), pre)
}

/// Weakest precondition of a superoperator for a predicate tuple.
///
/// Roundoff may lift an eigenvalue slightly above 1; anything within the
/// positivity tolerance is accepted, larger excursions are an error.
pub fn wp_super(f: &Superoperator, p: &PredicateTuple) -> Result<PredicateTuple> {
    wp_super_with(f, p, &Tolerances::default())
}

pub fn wp_super_with(f: &Superoperator, p: &PredicateTuple, tol: &Tolerances) -> Result<PredicateTuple> {
    let pre = wp_operator(f, p)?;
    let report = validate_predicate(&pre, tol);
    if !report.is_valid() {
        return Err(QwpError::InvalidPredicate(format!(
            "precondition is not a predicate ({report}); the superoperator increases trace"
        )));
    }
    Ok(PredicateTuple::trusted(pre))
}

/// `M` is a precondition of `N` under `F` iff `M ≼ wp(F)(N)` entrywise.
pub fn is_precondition(m: &PredicateTuple, f: &Superoperator, n: &PredicateTuple) -> Result<bool> {
    f.in_sig().expect_eq(m.sig())?;
    let w = wp_super(f, n)?;
    for (a, b) in m.entries().iter().zip(w.entries()) {
        if !loewner_leq(a, b, PSD_TOL)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Completely positive map on predicate tuples in adjoint Kraus form.
///
/// `post_sig` types the predicates it consumes (program output), `pre_sig`
/// the predicates it produces (program input). Block `[i][j]` maps entry `j`
/// of a postcondition into entry `i` of the precondition as
/// `M ↦ Σ_k A_k M A_k†`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateTransformer {
    post_sig: Signature,
    pre_sig: Signature,
    blocks: Vec<Vec<KrausChannel>>,
}

impl PredicateTransformer {
    /// The weakest-precondition transformer of `f`: `A = E†` blockwise.
    pub fn of(f: &Superoperator) -> Self {
        let blocks = (0..f.in_sig().len())
            .map(|i| {
                (0..f.out_sig().len())
                    .map(|j| {
                        let c = f.block(j, i);
                        KrausChannel::new(
                            c.out_dim(),
                            c.in_dim(),
                            c.kraus().iter().map(ComplexMatrix::adjoint).collect(),
                        )
                        .expect("adjoint shapes")
                    })
                    .collect()
            })
            .collect();
        PredicateTransformer {
            post_sig: f.out_sig().clone(),
            pre_sig: f.in_sig().clone(),
            blocks,
        }
    }

    pub fn zero(post_sig: &Signature, pre_sig: &Signature) -> Self {
        Self::of(&Superoperator::zero(pre_sig, post_sig))
    }

    pub fn post_sig(&self) -> &Signature {
        &self.post_sig
    }

    pub fn pre_sig(&self) -> &Signature {
        &self.pre_sig
    }

    pub fn block(&self, i: usize, j: usize) -> &KrausChannel {
        &self.blocks[i][j]
    }

    pub fn apply_operator(&self, n: &OperatorTuple) -> Result<OperatorTuple> {
        self.post_sig.expect_eq(n.sig())?;
        let pre = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let d = self.pre_sig.dim(i);
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .try_fold(ComplexMatrix::zeros(d, d), |acc, (j, c)| {
                        Ok(&acc + &c.apply(n.entry(j))?)
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorTuple::new(self.pre_sig.clone(), pre)
    }

    pub fn apply(&self, n: &PredicateTuple) -> Result<PredicateTuple> {
        PredicateTuple::from_tuple(self.apply_operator(n)?)
    }

    /// Healthiness: for each precondition entry `i`, `Σ_j Σ_k A_k A_k† ≼ I`.
    pub fn healthiness(&self, tol: &Tolerances) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (i, row) in self.blocks.iter().enumerate() {
            let d = self.pre_sig.dim(i);
            let mut acc = ComplexMatrix::zeros(d, d);
            for a in row.iter().flat_map(KrausChannel::kraus) {
                acc = &acc + &(a * &a.adjoint());
            }
            let top = herm_eigen(&acc.hermitian_part()).expect("Hermitian").max();
            report.check(codes::TRACE_INCREASING, top - 1.0, tol.psd, top, || {
                format!("precondition entry {i}: Σ A A† has eigenvalue {top} > 1")
            });
        }
        report
    }
}

/// Transformer order: `α ≼ β` iff `β − α` is completely positive, checked
/// blockwise on Choi matrices with tolerance `tol`.
pub fn transformer_leq(
    alpha: &PredicateTransformer,
    beta: &PredicateTransformer,
    tol: f64,
) -> Result<bool> {
    Ok(transformer_gap(alpha, beta)? >= -tol)
}

/// Smallest eigenvalue over all blocks of `Choi(β) − Choi(α)`.
pub fn transformer_gap(alpha: &PredicateTransformer, beta: &PredicateTransformer) -> Result<f64> {
    alpha.post_sig.expect_eq(&beta.post_sig)?;
    alpha.pre_sig.expect_eq(&beta.pre_sig)?;
    let mut gap = f64::INFINITY;
    for (ra, rb) in alpha.blocks.iter().zip(&beta.blocks) {
        for (a, b) in ra.iter().zip(rb) {
            if a.is_zero() && b.is_zero() {
                gap = gap.min(0.0);
                continue;
            }
            let diff = &b.choi() - &a.choi();
            gap = gap.min(herm_eigen(&diff.hermitian_part())?.min());
        }
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::consts::*;

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
    fn wp_channel_examples() {
        let m = ComplexMatrix::diag_real(&[0.3, 0.8]);
        assert_eq!(wp_channel(&KrausChannel::identity(2), &m).unwrap(), m);
        assert!(wp_channel(&KrausChannel::zero(2, 2), &m).unwrap().is_zero());
        let w = wp_channel(&KrausChannel::single(hadamard()), &proj0()).unwrap();
        assert!(w.max_distance(&proj_plus()) < 1e-15);
        assert!(matches!(
            wp_channel(&KrausChannel::identity(2), &pauli_z()),
            Err(QwpError::InvalidPredicate(_))
        ));
        assert!(matches!(
            wp_channel(&KrausChannel::identity(3), &m),
            Err(QwpError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn wp_of_measurement() {
        let m1 = ComplexMatrix::from_real(2, 2, &[0.5, 0.25, 0.25, 0.5]).unwrap();
        let m2 = proj_plus();
        let post = PredicateTuple::new(Signature::uniform(2, 2), vec![m1.clone(), m2.clone()]).unwrap();
        let pre = wp_super(&measure(), &post).unwrap();
        let expected = &(&(&proj0() * &m1) * &proj0()) + &(&(&proj1() * &m2) * &proj1());
        assert!(pre.entry(0).max_distance(&expected) < 1e-15);
    }

    #[test]
    fn wp_super_signature_mismatch() {
        let post = PredicateTuple::identity(&Signature::single(2));
        assert!(matches!(
            wp_super(&measure(), &post),
            Err(QwpError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn precondition_examples() {
        let f = measure();
        let n = PredicateTuple::new(
            Signature::uniform(2, 2),
            vec![proj_plus(), ComplexMatrix::diag_real(&[0.5, 0.5])],
        )
        .unwrap();
        let w = wp_super(&f, &n).unwrap();
        assert!(is_precondition(&w, &f, &n).unwrap());
        assert!(is_precondition(&PredicateTuple::zero(f.in_sig()), &f, &n).unwrap());
        // w = diag(0.5, 0.5); adding 1e-3·I stays a predicate but exceeds wp
        let bumped = PredicateTuple::from_tuple(
            w.as_tuple().map(|m| m + &ComplexMatrix::identity(2).scale_real(1e-3)),
        )
        .unwrap();
        assert!(!is_precondition(&bumped, &f, &n).unwrap());
    }

    #[test]
    fn transformer_order_examples() {
        let half = PredicateTransformer::of(&Superoperator::from_channel(KrausChannel::single(
            ComplexMatrix::identity(2).scale_real(0.5f64.sqrt()),
        )));
        let id = PredicateTransformer::of(&Superoperator::identity(&Signature::single(2)));
        assert!(transformer_leq(&half, &half, 1e-12).unwrap());
        assert!(transformer_leq(&half, &id, 1e-12).unwrap());
        assert!(!transformer_leq(&id, &half, 1e-12).unwrap());
        // Choi(id) − Choi(half) = 0.5·|Ω⟩⟨Ω| with ⟨Ω|Ω⟩ = d = 2
        let gap = transformer_gap(&id, &half).unwrap();
        assert!((gap + 1.0).abs() < 1e-12, "{gap}");
        let zero = PredicateTransformer::zero(&Signature::single(2), &Signature::single(2));
        assert!(transformer_leq(&zero, &id, 1e-12).unwrap());
        let m = PredicateTransformer::of(&measure());
        assert!(transformer_leq(&m, &id, 1e-12).is_err());
    }

    #[test]
    fn healthiness_report() {
        assert!(PredicateTransformer::of(&measure())
            .healthiness(&Tolerances::default())
            .is_valid());
        let loud = PredicateTransformer::of(&Superoperator::from_channel(KrausChannel::single(
            ComplexMatrix::diag_real(&[1.5, 1.0]),
        )));
        let r = loud.healthiness(&Tolerances::default());
        assert!(!r.is_valid());
        assert!((r.violations[0].witness - 2.25).abs() < 1e-12);
    }
}
