//! Structural combinators on superoperators.

use crate::domain::{KrausChannel, Signature, Superoperator};
use crate::error::Result;

/// `G ∘ F`: run `f` first, then `g`.
///
/// Block `(k, i)` is the path sum `Σ_j G[k][j] ∘ F[j][i]`, with Kraus list
/// `{G_b F_a}` over every intermediate index `j`. Products that are exactly
/// zero are dropped.
pub fn seq_compose(f: &Superoperator, g: &Superoperator) -> Result<Superoperator> {
    g.in_sig().expect_eq(f.out_sig())?;
    let mut blocks = Vec::with_capacity(g.out_sig().len());
    for k in 0..g.out_sig().len() {
        let mut row = Vec::with_capacity(f.in_sig().len());
        for i in 0..f.in_sig().len() {
            let mut acc = KrausChannel::zero(f.in_sig().dim(i), g.out_sig().dim(k));
            for j in 0..f.out_sig().len() {
                let (a, b) = (f.block(j, i), g.block(k, j));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.sum(&a.then(b)?)?;
            }
            row.push(acc);
        }
        blocks.push(row);
    }
    Superoperator::new(f.in_sig().clone(), g.out_sig().clone(), blocks)
}

/// Block-diagonal sum `F ⊕ G` acting on `σ_F ++ σ_G`.
pub fn coproduct(f: &Superoperator, g: &Superoperator) -> Superoperator {
    let in_sig = f.in_sig().concat(g.in_sig());
    let out_sig = f.out_sig().concat(g.out_sig());
    let (fi, fo) = (f.in_sig().len(), f.out_sig().len());
    Superoperator::from_fn(&in_sig, &out_sig, |j, i| match (j < fo, i < fi) {
        (true, true) => f.block(j, i).clone(),
        (false, false) => g.block(j - fo, i - fi).clone(),
        _ => KrausChannel::zero(in_sig.dim(i), out_sig.dim(j)),
    })
    .expect("blocks follow the concatenated signatures")
}

/// Adds an untouched classical bit as the most significant variable: `F ⊕ F`.
pub fn extend_classical_bit(f: &Superoperator) -> Superoperator {
    coproduct(f, f)
}

/// Adds an untouched qubit as the most significant tensor factor: every
/// Kraus operator `E` becomes `I₂ ⊗ E`.
pub fn extend_quantum_bit(f: &Superoperator) -> Superoperator {
    let double = |s: &Signature| {
        Signature::new(s.dims().iter().map(|d| 2 * d).collect()).expect("positive dims")
    };
    Superoperator::from_fn(&double(f.in_sig()), &double(f.out_sig()), |j, i| {
        f.block(j, i).lift_front(2)
    })
    .expect("lifted blocks follow the doubled signatures")
}
