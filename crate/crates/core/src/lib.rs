//! Weakest preconditions for quantum programs.
//!
//! Programs denote completely positive, trace-nonincreasing maps written in
//! Kraus form. Their predicate transformers are the adjoint maps
//! `N ↦ Σ E† N E`, and a Hoare-style triple `{M} F {N}` holds when
//! `M ≼ wp(F)(N)` in the Löwner order.
//!
//! * [`matrix`] and [`eigen`]: dense complex linear algebra.
//! * [`domain`]: signatures, density-matrix tuples, predicates, channels.
//! * [`wp`]: the backward semantics, composition laws, loops and recursion.
//! * [`qpl`]: a small flow-chart language that elaborates to superoperators.

pub mod domain;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod random;
pub mod tolerance;
pub mod wp;
pub mod qpl;

pub use error::{QwpError, Result};
pub use matrix::{ComplexMatrix, ComplexScalar};
