//! Builtin gates and matrix literals.

use num_complex::Complex64;

use crate::error::{QwpError, Result};
use crate::matrix::{consts, ComplexMatrix};
use crate::qpl::ast::{Builtin, UnitaryRef};
use crate::tolerance::EQ_TOL;

/// Largest register accepted by the parameterized gates.
pub const MAX_REGISTER: u64 = 10;

fn register_dim(n: u64) -> Result<usize> {
    if n == 0 || n > MAX_REGISTER {
        return Err(QwpError::OutOfRange(format!(
            "register size {n} outside 1..={MAX_REGISTER}"
        )));
    }
    Ok(1usize << n)
}

fn marked(n: u64, s: u64) -> Result<(usize, usize)> {
    let d = register_dim(n)?;
    if s >= d as u64 {
        return Err(QwpError::OutOfRange(format!(
            "marked element {s} outside 0..{d}"
        )));
    }
    Ok((d, s as usize))
}

/// Inversion about the mean, `(2/N) Σ_{ij} |i⟩⟨j| − I`.
pub fn iam(n: u64) -> Result<ComplexMatrix> {
    let d = register_dim(n)?;
    let c = 2.0 / d as f64;
    Ok(ComplexMatrix::from_fn(d, d, |i, j| {
        Complex64::new(if i == j { c - 1.0 } else { c }, 0.0)
    }))
}

/// Phase oracle `I − 2|s⟩⟨s|`.
pub fn oracle(n: u64, s: u64) -> Result<ComplexMatrix> {
    let (d, s) = marked(n, s)?;
    let diag: Vec<f64> = (0..d).map(|i| if i == s { -1.0 } else { 1.0 }).collect();
    Ok(ComplexMatrix::diag_real(&diag))
}

/// One search step: the oracle, then inversion about the mean.
pub fn grover_g(n: u64, s: u64) -> Result<ComplexMatrix> {
    Ok(&iam(n)? * &oracle(n, s)?)
}

/// Rotation angle of one search step: `sin θ = 2√(N−1)/N`.
pub fn grover_angle(n: u64) -> Result<f64> {
    let d = register_dim(n)? as f64;
    Ok((2.0 * (d - 1.0).sqrt() / d).asin())
}

/// Steps that rotate the uniform superposition onto the marked state:
/// `round(arccos(1/√N) / θ)`.
pub fn grover_iterations(n: u64) -> Result<usize> {
    let d = register_dim(n)? as f64;
    let theta = grover_angle(n)?;
    Ok(((1.0 / d.sqrt()).acos() / theta).round() as usize)
}

fn builtin(op: Builtin, args: &[u64]) -> Result<ComplexMatrix> {
    if args.len() != op.arity() {
        return Err(QwpError::Type(format!(
            "`{}` takes {} parameters, got {}",
            op.name(),
            op.arity(),
            args.len()
        )));
    }
    match op {
        Builtin::H => Ok(consts::hadamard()),
        Builtin::X => Ok(consts::pauli_x()),
        Builtin::Y => Ok(consts::pauli_y()),
        Builtin::Z => Ok(consts::pauli_z()),
        Builtin::Cnot => Ok(consts::cnot()),
        Builtin::Iam => iam(args[0]),
        Builtin::Oracle => oracle(args[0], args[1]),
        Builtin::GroverG => grover_g(args[0], args[1]),
    }
}

/// The matrix of a unitary reference and the number of qubits it acts on.
pub fn resolve(u: &UnitaryRef) -> Result<(ComplexMatrix, usize)> {
    let m = match u {
        UnitaryRef::Builtin { op, args } => builtin(*op, args)?,
        UnitaryRef::Literal(rows) => {
            let d = rows.len();
            if rows.iter().any(|r| r.len() != d) {
                return Err(QwpError::Elaboration(format!(
                    "matrix literal with {d} rows is not square"
                )));
            }
            if d < 2 || !d.is_power_of_two() {
                return Err(QwpError::Elaboration(format!(
                    "matrix literal dimension {d} is not a power of two ≥ 2"
                )));
            }
            let m = ComplexMatrix::from_rows(rows);
            let deviation = m.unitarity_deviation();
            if !(deviation <= EQ_TOL) {
                return Err(QwpError::Elaboration(format!(
                    "matrix literal is not unitary (‖U†U − I‖ = {deviation:e})"
                )));
            }
            m
        }
    };
    let qubits = m.rows().trailing_zeros() as usize;
    Ok((m, qubits))
}
