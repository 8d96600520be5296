//! Semantic objects: signatures, states, predicates, channels and superoperators.

mod channel;
mod signature;
mod superop;
mod tuple;
mod validation;

pub use channel::KrausChannel;
pub use signature::Signature;
pub use superop::Superoperator;
pub use tuple::{
    expectation, is_valid_predicate_entry, satisfies, validate_predicate, validate_predicate_entry,
    validate_state, DensityState, OperatorTuple, PredicateTuple,
};
pub use validation::{codes, ValidationReport, Violation};

use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

/// Reports whether `Σ E†E ≼ I`.
pub fn validate_channel(c: &KrausChannel) -> ValidationReport {
    c.validate(&Tolerances::default())
}

/// Forward action of a channel on one matrix.
pub fn apply_channel(c: &KrausChannel, rho: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    c.apply(rho)
}

/// Forward action of a superoperator on a state.
pub fn apply_super(f: &Superoperator, s: &DensityState) -> crate::Result<DensityState> {
    f.apply(s)
}

/// Choi matrix of a channel.
pub fn choi_matrix(c: &KrausChannel) -> ComplexMatrix {
    c.choi()
}
