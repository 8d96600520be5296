//! Stabilizer membership for pure states.

use crate::error::{QwpError, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::EQ_TOL;

const VECTOR_TOL: f64 = 1e-6;

/// Both sides of the stabilizer test for `U` and `|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizerWitness {
    /// `tr(U |ψ⟩⟨ψ|)`, real part.
    pub expectation: f64,
    /// `‖U|ψ⟩ − |ψ⟩‖₂`.
    pub vector_residual: f64,
}

impl StabilizerWitness {
    pub fn by_trace(&self) -> bool {
        (self.expectation - 1.0).abs() <= EQ_TOL
    }

    pub fn by_vector(&self) -> bool {
        self.vector_residual <= VECTOR_TOL
    }
}

pub fn stabilizer_witness(u: &ComplexMatrix, psi: &ComplexMatrix) -> Result<StabilizerWitness> {
    if !u.is_square() {
        return Err(QwpError::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let deviation = u.unitarity_deviation();
    if deviation > EQ_TOL {
        return Err(QwpError::NotUnitary { deviation });
    }
    if psi.cols() != 1 || psi.rows() != u.rows() {
        return Err(QwpError::DimensionMismatch(format!(
            "state of shape {}×{} for a {}-dimensional unitary",
            psi.rows(),
            psi.cols(),
            u.rows()
        )));
    }
    let norm = psi.frobenius_norm();
    if (norm - 1.0).abs() > EQ_TOL {
        return Err(QwpError::NotNormalized { norm });
    }
    let rho = ComplexMatrix::projector(psi);
    let expectation = u.trace_product(&rho)?.re;
    let vector_residual = (&(u * psi) - psi).frobenius_norm();
    Ok(StabilizerWitness {
        expectation,
        vector_residual,
    })
}

/// `tr(U|ψ⟩⟨ψ|) = 1` within `1e-9`, cross-checked against `U|ψ⟩ = |ψ⟩`.
pub fn stabilizer_check(u: &ComplexMatrix, psi: &ComplexMatrix) -> Result<bool> {
    let w = stabilizer_witness(u, psi)?;
    let verdict = w.by_trace();
    debug_assert_eq!(verdict, w.by_vector(), "{w:?}");
    Ok(verdict)
}
