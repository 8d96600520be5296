//! Loops as monoidal traces and recursion as least fixpoints.

use std::ops::Range;

use crate::domain::{Signature, Superoperator};
use crate::eigen::herm_eigen;
use crate::error::{QwpError, Result};
use crate::tolerance::{MAX_ITER, TRUNCATION_TOL};
use crate::wp::compose::seq_compose;

/// A superoperator `E : σ ++ τ → σ' ++ τ` split at the loop wire `τ`.
///
/// The four components are `E11 : σ → σ'`, `E12 : σ → τ`, `E21 : τ → σ'`
/// and `E22 : τ → τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopDecomposition {
    op: Superoperator,
    split_in: usize,
    split_out: usize,
}

impl LoopDecomposition {
    /// `split_in` and `split_out` are the number of leading entries of the
    /// input and output signatures belonging to `σ` and `σ'`.
    pub fn new(op: Superoperator, split_in: usize, split_out: usize) -> Result<Self> {
        let (ni, no) = (op.in_sig().len(), op.out_sig().len());
        if split_in == 0 || split_out == 0 || split_in >= ni || split_out >= no {
            return Err(QwpError::InvalidSignature(format!(
                "loop split ({split_in}, {split_out}) of {} → {} leaves an empty part",
                op.in_sig(),
                op.out_sig()
            )));
        }
        let tau_in = op.in_sig().slice(split_in, ni)?;
        let tau_out = op.out_sig().slice(split_out, no)?;
        tau_in.expect_eq(&tau_out)?;
        Ok(LoopDecomposition {
            op,
            split_in,
            split_out,
        })
    }

    /// Builds `E` from its four components.
    pub fn from_parts(
        e11: &Superoperator,
        e12: &Superoperator,
        e21: &Superoperator,
        e22: &Superoperator,
    ) -> Result<Self> {
        e12.in_sig().expect_eq(e11.in_sig())?;
        e21.out_sig().expect_eq(e11.out_sig())?;
        e22.in_sig().expect_eq(e21.in_sig())?;
        e22.out_sig().expect_eq(e12.out_sig())?;
        let in_sig = e11.in_sig().concat(e21.in_sig());
        let out_sig = e11.out_sig().concat(e12.out_sig());
        let (si, so) = (e11.in_sig().len(), e11.out_sig().len());
        let op = Superoperator::from_fn(&in_sig, &out_sig, |j, i| {
            match (j < so, i < si) {
                (true, true) => e11.block(j, i),
                (false, true) => e12.block(j - so, i),
                (true, false) => e21.block(j, i - si),
                (false, false) => e22.block(j - so, i - si),
            }
            .clone()
        })?;
        Self::new(op, si, so)
    }

    pub fn op(&self) -> &Superoperator {
        &self.op
    }

    fn ins(&self, tau: bool) -> Range<usize> {
        if tau {
            self.split_in..self.op.in_sig().len()
        } else {
            0..self.split_in
        }
    }

    fn outs(&self, tau: bool) -> Range<usize> {
        if tau {
            self.split_out..self.op.out_sig().len()
        } else {
            0..self.split_out
        }
    }

    pub fn e11(&self) -> Superoperator {
        self.op.restrict(self.outs(false), self.ins(false)).expect("in range")
    }

    pub fn e12(&self) -> Superoperator {
        self.op.restrict(self.outs(true), self.ins(false)).expect("in range")
    }

    pub fn e21(&self) -> Superoperator {
        self.op.restrict(self.outs(false), self.ins(true)).expect("in range")
    }

    pub fn e22(&self) -> Superoperator {
        self.op.restrict(self.outs(true), self.ins(true)).expect("in range")
    }
}

fn check_limits(tol: f64, max_iter: usize) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(QwpError::InvalidTolerance(format!("tolerance {tol} must be positive")));
    }
    if max_iter == 0 {
        return Err(QwpError::InvalidTolerance("max_iter must be at least 1".into()));
    }
    Ok(())
}

/// `Tr(E) = E11 + Σ_{i≥0} E21 ∘ E22^i ∘ E12` with the default limits.
pub fn monoidal_trace(l: &LoopDecomposition) -> Result<Superoperator> {
    monoidal_trace_with(l, TRUNCATION_TOL, MAX_ITER)
}

/// Bound on the Choi max-norm of anything still to be added: every later
/// term is `G ∘ path` with `G` trace-nonincreasing overall, so each input
/// column's Choi trace `Σ_k Σ_E ‖E‖²_F` bounds the whole tail.
fn tail_bound(path: &Superoperator) -> f64 {
    (0..path.in_sig().len())
        .map(|i| {
            (0..path.out_sig().len())
                .flat_map(|k| path.block(k, i).kraus())
                .map(|e| e.frobenius_norm().powi(2))
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// Monoidal trace, truncated once a term's blockwise Choi max-norm is at
/// most `tol` and the remaining feedback can add no more than `tol`. Fails
/// with `NonConvergent` after `max_iter` terms.
pub fn monoidal_trace_with(l: &LoopDecomposition, tol: f64, max_iter: usize) -> Result<Superoperator> {
    check_limits(tol, max_iter)?;
    let (e21, e22) = (l.e21(), l.e22());
    let mut sum = l.e11();
    let mut path = l.e12();
    let mut increment = f64::INFINITY;
    for _ in 0..max_iter {
        let term = seq_compose(&path, &e21)?;
        increment = term.choi_max_norm();
        sum = sum.sum(&term)?.compressed();
        path = seq_compose(&path, &e22)?.compressed();
        if increment <= tol && tail_bound(&path) <= tol {
            return Ok(sum);
        }
        if path.is_zero() {
            return Ok(sum);
        }
    }
    Err(QwpError::NonConvergent {
        iterations: max_iter,
        increment,
    })
}

/// Partial sum `E11 + Σ_{i<k} E21 ∘ E22^i ∘ E12`: the loop unrolled so
/// that at most `k` passes through the body are kept.
pub fn monoidal_trace_partial(l: &LoopDecomposition, k: usize) -> Result<Superoperator> {
    let (e21, e22) = (l.e21(), l.e22());
    let mut sum = l.e11();
    let mut path = l.e12();
    for _ in 0..k {
        sum = sum.sum(&seq_compose(&path, &e21)?)?.compressed();
        path = seq_compose(&path, &e22)?.compressed();
    }
    Ok(sum)
}

/// A recursive definition `f = Φ(f)` where `Φ` builds the body from a
/// candidate meaning of the recursive call, typed `hole_in → hole_out`.
pub struct RecursiveSpec<'a> {
    hole_in: Signature,
    hole_out: Signature,
    body: Box<dyn Fn(&Superoperator) -> Result<Superoperator> + 'a>,
}

impl<'a> RecursiveSpec<'a> {
    pub fn new(
        hole_in: Signature,
        hole_out: Signature,
        body: impl Fn(&Superoperator) -> Result<Superoperator> + 'a,
    ) -> Self {
        RecursiveSpec {
            hole_in,
            hole_out,
            body: Box::new(body),
        }
    }

    pub fn hole_in(&self) -> &Signature {
        &self.hole_in
    }

    pub fn hole_out(&self) -> &Signature {
        &self.hole_out
    }

    /// One application of `Φ`, with its result checked against the hole type.
    pub fn step(&self, x: &Superoperator) -> Result<Superoperator> {
        let y = (self.body)(x)?;
        self.hole_in.expect_eq(y.in_sig())?;
        self.hole_out.expect_eq(y.out_sig())?;
        Ok(y)
    }

    /// `Φ^k(0)`.
    pub fn unroll(&self, k: usize) -> Result<Superoperator> {
        let mut x = Superoperator::zero(&self.hole_in, &self.hole_out);
        for _ in 0..k {
            x = self.step(&x)?.compressed();
        }
        Ok(x)
    }
}

/// Least fixpoint with the default limits.
pub fn recursive_fixpoint(spec: &RecursiveSpec) -> Result<Superoperator> {
    recursive_fixpoint_with(spec, TRUNCATION_TOL, MAX_ITER)
}

/// Kleene iteration `F₀ = 0`, `F_{i+1} = Φ(F_i)` until consecutive iterates
/// are within `tol` in blockwise Choi max-norm.
///
/// Each iterate must dominate its predecessor in the Choi order; a drop by
/// more than `max(tol, 1e-12)` is reported as `NonMonotone`, with the most
/// negative eigenvalue of the Choi difference as witness.
pub fn recursive_fixpoint_with(spec: &RecursiveSpec, tol: f64, max_iter: usize) -> Result<Superoperator> {
    check_limits(tol, max_iter)?;
    let slack = tol.max(1e-12);
    let mut current = Superoperator::zero(&spec.hole_in, &spec.hole_out);
    let mut change = f64::INFINITY;
    for iteration in 1..=max_iter {
        let next = spec.step(&current)?.compressed();
        let witness = choi_gap(&current, &next)?;
        if witness < -slack {
            return Err(QwpError::NonMonotone { iteration, witness });
        }
        change = next.choi_distance(&current);
        current = next;
        if change <= tol {
            return Ok(current);
        }
    }
    Err(QwpError::NonConvergent {
        iterations: max_iter,
        increment: change,
    })
}

/// Smallest eigenvalue over blocks of `Choi(b) − Choi(a)`.
fn choi_gap(a: &Superoperator, b: &Superoperator) -> Result<f64> {
    let mut gap = 0.0f64;
    for (x, y) in a.blocks().iter().flatten().zip(b.blocks().iter().flatten()) {
        if x.is_zero() && y.is_zero() {
            continue;
        }
        let diff = &y.choi() - &x.choi();
        gap = gap.min(herm_eigen(&diff.hermitian_part())?.min());
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DensityState, KrausChannel};
    use crate::matrix::consts::*;
    use crate::matrix::ComplexMatrix;

    fn scalar(p: f64) -> Superoperator {
        Superoperator::from_channel(
            KrausChannel::single(ComplexMatrix::identity(1)).scaled(p).unwrap(),
        )
    }

    #[test]
    fn geometric_loop() {
        // exit with 1/2, repeat with 1/2: total exit probability 1
        let l = LoopDecomposition::from_parts(&scalar(0.0), &scalar(1.0), &scalar(0.5), &scalar(0.5))
            .unwrap();
        let t = monoidal_trace(&l).unwrap();
        let p = t.block(0, 0).choi().get(0, 0).re;
        assert!((p - 1.0).abs() < 1e-9, "{p}");
        let p3 = monoidal_trace_partial(&l, 3).unwrap().block(0, 0).choi().get(0, 0).re;
        assert!((p3 - 0.875).abs() < 1e-15);
    }

    #[test]
    fn loop_with_zero_feedback_is_exact() {
        let h = Superoperator::from_channel(KrausChannel::single(hadamard()));
        let x = Superoperator::from_channel(KrausChannel::single(pauli_x()));
        let z = Superoperator::zero(&Signature::single(2), &Signature::single(2));
        let l = LoopDecomposition::from_parts(&z, &h, &x, &z).unwrap();
        let t = monoidal_trace(&l).unwrap();
        assert!(t.choi_distance(&seq_compose(&h, &x).unwrap()) < 1e-15);
    }

    #[test]
    fn zero_first_term_does_not_truncate() {
        // enter on |0>, exit only on |1>, so the first term vanishes
        let p0 = Superoperator::from_channel(KrausChannel::single(ComplexMatrix::diag_real(&[1.0, 0.0])));
        let p1 = Superoperator::from_channel(KrausChannel::single(ComplexMatrix::diag_real(&[0.0, 1.0])));
        let x = Superoperator::from_channel(KrausChannel::single(pauli_x()));
        let z = Superoperator::zero(&Signature::single(2), &Signature::single(2));
        let l = LoopDecomposition::from_parts(&z, &p0, &p1, &x.scaled(0.5).unwrap()).unwrap();
        assert!(monoidal_trace_partial(&l, 1).unwrap().is_zero());
        // odd passes exit with weight 1/2 + 1/8 + ... = 2/3
        let t = monoidal_trace(&l).unwrap();
        let exact = seq_compose(&seq_compose(&p0, &x).unwrap(), &p1).unwrap().scaled(2.0 / 3.0).unwrap();
        assert!(t.choi_distance(&exact) < 1e-9, "{}", t.choi_distance(&exact));
    }

    #[test]
    fn nonconvergent_and_limits() {
        let l = LoopDecomposition::from_parts(&scalar(0.0), &scalar(1.0), &scalar(0.1), &scalar(0.9))
            .unwrap();
        assert!(matches!(
            monoidal_trace_with(&l, 1e-12, 5),
            Err(QwpError::NonConvergent { iterations: 5, .. })
        ));
        assert!(matches!(
            monoidal_trace_with(&l, 0.0, 5),
            Err(QwpError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn decomposition_rejects_mismatched_wire() {
        let op = Superoperator::zero(
            &Signature::new(vec![2, 2]).unwrap(),
            &Signature::new(vec![2, 3]).unwrap(),
        );
        assert!(LoopDecomposition::new(op.clone(), 1, 1).is_err());
        assert!(LoopDecomposition::new(op, 0, 1).is_err());
    }

    #[test]
    fn fixpoint_of_coin_recursion() {
        // f = 1/2·id + 1/2·(X ; f): the least fixpoint is (2/3)·id + (1/3)·X
        let x = Superoperator::from_channel(KrausChannel::single(pauli_x()));
        let id = Superoperator::identity(&Signature::single(2));
        let spec = RecursiveSpec::new(Signature::single(2), Signature::single(2), |f| {
            id.scaled(0.5)?.sum(&seq_compose(&x, f)?.scaled(0.5)?)
        });
        let fix = recursive_fixpoint(&spec).unwrap();
        let rho = DensityState::single(proj0()).unwrap();
        let out = fix.apply(&rho).unwrap();
        let want = ComplexMatrix::diag_real(&[2.0 / 3.0, 1.0 / 3.0]);
        assert!(out.entry(0).max_distance(&want) < 1e-9);
        assert!(fix.choi_distance(&spec.step(&fix).unwrap()) < 1e-9);
    }

    #[test]
    fn nonmonotone_body_is_rejected() {
        let id = Superoperator::identity(&Signature::single(2));
        let spec = RecursiveSpec::new(Signature::single(2), Signature::single(2), |f| {
            if f.is_zero() {
                Ok(id.clone())
            } else {
                Ok(id.scaled(0.5)?)
            }
        });
        assert!(matches!(
            recursive_fixpoint(&spec),
            Err(QwpError::NonMonotone { iteration: 2, .. })
        ));
    }

    #[test]
    fn divergent_recursion_is_zero() {
        // f = f has least fixpoint 0
        let spec = RecursiveSpec::new(Signature::single(2), Signature::single(2), |f| Ok(f.clone()));
        assert!(recursive_fixpoint(&spec).unwrap().is_zero());
    }
}
