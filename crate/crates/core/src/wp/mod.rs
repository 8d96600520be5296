//! Backward semantics: weakest preconditions, composition laws, loops,
//! recursion, duality and stabilizers.

pub mod compose;
pub mod duality;
pub mod iterate;
pub mod stabilizer;
pub mod transformer;

pub use compose::{coproduct, extend_classical_bit, extend_quantum_bit, seq_compose};
pub use duality::{duality_check, DualityReport};
pub use iterate::{
    monoidal_trace, monoidal_trace_partial, monoidal_trace_with, recursive_fixpoint,
    recursive_fixpoint_with, LoopDecomposition, RecursiveSpec,
};
pub use stabilizer::{stabilizer_check, stabilizer_witness, StabilizerWitness};
pub use transformer::{
    is_precondition, transformer_gap, transformer_leq, wp_channel, wp_operator, wp_super,
    wp_super_with, PredicateTransformer,
};
