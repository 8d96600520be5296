//! Canonical example programs.

use crate::error::{QwpError, Result};
use crate::matrix::{consts, ComplexMatrix};
use crate::qpl::ast::Program;
use crate::qpl::context::TypingContext;
use crate::qpl::parser::parse;
use crate::qpl::unitary::grover_iterations;

/// Fair coin toss on an ambient register: a fresh qubit in `|+⟩` is
/// measured and dropped, so the register ends on one of two paths.
pub const COIN_SOURCE: &str = "\
new qbit q := 0
q *= H
measure q
discard q
";

pub fn build_coin() -> Program {
    parse(COIN_SOURCE).expect("coin source parses")
}

/// Register `r0 … r{n-1}` the coin toss runs over.
pub fn coin_context(n: usize) -> TypingContext {
    TypingContext::register("r", n)
}

pub const MAX_GROVER_QUBITS: usize = 5;

fn grover_args(n: usize, s: usize) -> Result<()> {
    if !(1..=MAX_GROVER_QUBITS).contains(&n) {
        return Err(QwpError::OutOfRange(format!(
            "search register of {n} qubits outside 1..={MAX_GROVER_QUBITS}"
        )));
    }
    if s >= 1 << n {
        return Err(QwpError::OutOfRange(format!(
            "marked element {s} outside 0..{}",
            1 << n
        )));
    }
    Ok(())
}

fn register_names(n: usize) -> String {
    (0..n).map(|k| format!("q{k}")).collect::<Vec<_>>().join(", ")
}

/// Search loop over an input register `q0 … q{n-1}` (`q0` most
/// significant), followed by a measurement of every qubit. Run on the
/// uniform superposition, outcome `s` carries the success probability.
pub fn grover_source(n: usize, s: usize) -> Result<String> {
    grover_args(n, s)?;
    let reg = register_names(n);
    let c = grover_iterations(n as u64)?;
    Ok(format!(
        "input qbit {reg}\nrepeat {c} {{\n    {reg} *= GroverG({n}, {s})\n}}\nmeasure {reg}\n"
    ))
}

pub fn build_grover(n: usize, s: usize) -> Result<Program> {
    Ok(parse(&grover_source(n, s)?).expect("generated source parses"))
}

/// The full algorithm with no inputs: the register is allocated and put in
/// the uniform superposition before the search loop.
pub fn grover_closed_source(n: usize, s: usize) -> Result<String> {
    let open = grover_source(n, s)?;
    let body = open.split_once('\n').map(|(_, rest)| rest).unwrap_or("");
    let mut src = String::new();
    for k in (0..n).rev() {
        src.push_str(&format!("new qbit q{k} := 0\n"));
    }
    for k in 0..n {
        src.push_str(&format!("q{k} *= H\n"));
    }
    src.push_str(body);
    Ok(src)
}

pub fn build_grover_closed(n: usize, s: usize) -> Result<Program> {
    Ok(parse(&grover_closed_source(n, s)?).expect("generated source parses"))
}

/// Uniform superposition `|ψ⟩ = N^{-1/2} Σ |i⟩` as a column vector.
pub fn uniform_superposition(n: usize) -> ComplexMatrix {
    let d = 1usize << n;
    ComplexMatrix::from_real(d, 1, &vec![1.0 / (d as f64).sqrt(); d]).expect("finite")
}

pub const BELL_SOURCE: &str = "\
input qbit a, b
a *= H
a, b *= CNOT
";

/// Bell-state preparation `U = CNOT·(H⊗I)` with the stabilizer generators
/// of `U|00⟩` and their expected weakest preconditions.
#[derive(Debug, Clone)]
pub struct BellStabilizer {
    pub program: Program,
    pub unitary: ComplexMatrix,
    pub generators: Vec<ComplexMatrix>,
    pub expected_wp: Vec<ComplexMatrix>,
    pub bell_state: ComplexMatrix,
    pub input_state: ComplexMatrix,
}

pub fn build_bell_stabilizer() -> BellStabilizer {
    let id = ComplexMatrix::identity(2);
    let (x, z) = (consts::pauli_x(), consts::pauli_z());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    BellStabilizer {
        program: parse(BELL_SOURCE).expect("bell source parses"),
        unitary: &consts::cnot() * &consts::hadamard().tensor(&id),
        generators: vec![z.tensor(&z), x.tensor(&x)],
        expected_wp: vec![id.tensor(&z), z.tensor(&id)],
        bell_state: ComplexMatrix::from_real(4, 1, &[h, 0.0, 0.0, h]).expect("finite"),
        input_state: ComplexMatrix::basis(4, 0),
    }
}

/// Flip a qubit with `H` until a fair coin shows 0, as a while loop.
pub const FLIP_WHILE_SOURCE: &str = "\
input qbit q
new bit b := 1
while b {
    q *= H
    new qbit c := 0
    c *= H
    measure c { b := 0 } else { }
    discard c
}
discard b
";

/// The same loop as a recursive definition.
pub const FLIP_REC_SOURCE: &str = "\
input qbit q
rec flip {
    q *= H
    new qbit c := 0
    c *= H
    measure c { discard c } else { discard c; call flip }
}
";
