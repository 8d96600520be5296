//! Python module `qwp`: matrices, tuples, channels, superoperators and
//! programs, with the weakest-precondition operations on them.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qwp_core::domain::{
    expectation, DensityState, KrausChannel, OperatorTuple, PredicateTuple, Signature,
    Superoperator,
};
use qwp_core::qpl::{self, library, ElabOptions, TypingContext};
use qwp_core::tolerance::Tolerances;
use qwp_core::wp;
use qwp_core::{ComplexMatrix, QwpError};

create_exception!(qwp, QwpException, PyException, "Base class for engine errors.");
create_exception!(qwp, ProgramError, QwpException, "Syntax, scope, type or elaboration error.");
create_exception!(qwp, ValidationError, QwpException, "An input failed validation.");
create_exception!(qwp, NonConvergentError, QwpException, "Iteration or recursion did not converge.");

/// Error classes as seen from Python.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ErrorClass {
    Program,
    Validation,
    NonConvergent,
}

fn classify(e: &QwpError) -> ErrorClass {
    match e {
        QwpError::Syntax { .. } | QwpError::Scope { .. } | QwpError::Type(_) | QwpError::Elaboration(_) => {
            ErrorClass::Program
        }
        QwpError::NonConvergent { .. } | QwpError::NonMonotone { .. } => ErrorClass::NonConvergent,
        _ => ErrorClass::Validation,
    }
}

fn err(e: QwpError) -> PyErr {
    let msg = format!("{}: {e}", e.kind());
    match classify(&e) {
        ErrorClass::Program => ProgramError::new_err(msg),
        ErrorClass::Validation => ValidationError::new_err(msg),
        ErrorClass::NonConvergent => NonConvergentError::new_err(msg),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    ValidationError::new_err(format!("InvalidInput: {e}"))
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).expect("serializable");
    py.import("json")?.call_method1("loads", (text,))
}

fn sig(dims: Vec<usize>) -> PyResult<Signature> {
    Signature::new(dims).map_err(err)
}

#[pyclass(name = "Matrix", module = "qwp")]
#[derive(Clone)]
struct PyMatrix {
    inner: ComplexMatrix,
}

#[pymethods]
impl PyMatrix {
    /// From a list of rows of complex (or real) numbers.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ValidationError::new_err("rows have different lengths"));
        }
        let n = rows.len();
        let data = rows.into_iter().flatten().collect();
        Ok(PyMatrix {
            inner: ComplexMatrix::new(n, cols, data).map_err(err)?,
        })
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyMatrix { inner: ComplexMatrix::identity(n) }
    }

    #[staticmethod]
    fn basis(dim: usize, index: usize) -> Self {
        PyMatrix { inner: ComplexMatrix::basis(dim, index) }
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    #[staticmethod]
    fn projector(v: &PyMatrix) -> Self {
        PyMatrix { inner: ComplexMatrix::projector(&v.inner) }
    }

    /// One of `I X Y Z H CNOT P0 P1`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        use qwp_core::matrix::consts::*;
        let inner = match name {
            "I" => ComplexMatrix::identity(2),
            "X" => pauli_x(),
            "Y" => pauli_y(),
            "Z" => pauli_z(),
            "H" => hadamard(),
            "CNOT" => cnot(),
            "P0" => proj0(),
            "P1" => proj1(),
            _ => return Err(ValidationError::new_err(format!("unknown matrix `{name}`"))),
        };
        Ok(PyMatrix { inner })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        (0..self.inner.rows())
            .map(|i| (0..self.inner.cols()).map(|j| self.inner.get(i, j)).collect())
            .collect()
    }

    fn __getitem__(&self, ij: (usize, usize)) -> PyResult<Complex64> {
        if ij.0 >= self.inner.rows() || ij.1 >= self.inner.cols() {
            return Err(pyo3::exceptions::PyIndexError::new_err("index out of range"));
        }
        Ok(self.inner.get(ij.0, ij.1))
    }

    fn adjoint(&self) -> Self {
        PyMatrix { inner: self.inner.adjoint() }
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.multiply(&other.inner).map_err(err)? })
    }

    fn __add__(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn __sub__(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn scale(&self, c: Complex64) -> Self {
        PyMatrix { inner: self.inner.scale(c) }
    }

    fn tensor(&self, other: &PyMatrix) -> Self {
        PyMatrix { inner: self.inner.tensor(&other.inner) }
    }

    fn trace(&self) -> PyResult<Complex64> {
        self.inner.trace().map_err(err)
    }

    fn max_distance(&self, other: &PyMatrix) -> f64 {
        self.inner.max_distance(&other.inner)
    }

    fn is_hermitian(&self, tol: f64) -> bool {
        self.inner.is_hermitian(tol)
    }

    /// Ascending eigenvalues of a Hermitian matrix.
    fn eigenvalues(&self) -> PyResult<Vec<f64>> {
        qwp_core::eigen::herm_eigenvalues(&self.inner).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyMatrix { inner: serde_json::from_str(s).map_err(json_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{})\n{}", self.inner.rows(), self.inner.cols(), self.inner)
    }
}

fn matrices(ms: Vec<PyMatrix>) -> Vec<ComplexMatrix> {
    ms.into_iter().map(|m| m.inner).collect()
}

fn wrap_all(ms: &[ComplexMatrix]) -> Vec<PyMatrix> {
    ms.iter().map(|m| PyMatrix { inner: m.clone() }).collect()
}

/// Tuple of density matrices with total trace at most 1.
#[pyclass(name = "DensityState", module = "qwp")]
#[derive(Clone)]
struct PyState {
    inner: DensityState,
}

#[pymethods]
impl PyState {
    #[new]
    fn new(entries: Vec<PyMatrix>) -> PyResult<Self> {
        let e = matrices(entries);
        let s = sig(e.iter().map(ComplexMatrix::rows).collect())?;
        Ok(PyState { inner: DensityState::new(s, e).map_err(err)? })
    }

    #[getter]
    fn sig(&self) -> Vec<usize> {
        self.inner.sig().dims().to_vec()
    }

    #[getter]
    fn entries(&self) -> Vec<PyMatrix> {
        wrap_all(self.inner.entries())
    }

    fn traces(&self) -> Vec<f64> {
        self.inner.traces()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyState { inner: serde_json::from_str(s).map_err(json_err)? })
    }

    fn __repr__(&self) -> String {
        format!("DensityState(sig={})", self.inner.sig())
    }
}

/// Tuple of predicates: each entry positive with eigenvalues at most 1.
#[pyclass(name = "PredicateTuple", module = "qwp")]
#[derive(Clone)]
struct PyPredicate {
    inner: PredicateTuple,
}

#[pymethods]
impl PyPredicate {
    #[new]
    fn new(entries: Vec<PyMatrix>) -> PyResult<Self> {
        let e = matrices(entries);
        let s = sig(e.iter().map(ComplexMatrix::rows).collect())?;
        Ok(PyPredicate { inner: PredicateTuple::new(s, e).map_err(err)? })
    }

    #[staticmethod]
    fn identity(sig_dims: Vec<usize>) -> PyResult<Self> {
        Ok(PyPredicate { inner: PredicateTuple::identity(&sig(sig_dims)?) })
    }

    #[getter]
    fn sig(&self) -> Vec<usize> {
        self.inner.sig().dims().to_vec()
    }

    #[getter]
    fn entries(&self) -> Vec<PyMatrix> {
        wrap_all(self.inner.entries())
    }

    /// `Σ tr(M_i ρ_i)`.
    fn expectation(&self, state: &PyState) -> PyResult<f64> {
        expectation(&state.inner, &self.inner).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyPredicate { inner: serde_json::from_str(s).map_err(json_err)? })
    }

    fn __repr__(&self) -> String {
        format!("PredicateTuple(sig={})", self.inner.sig())
    }
}

#[pyclass(name = "KrausChannel", module = "qwp")]
#[derive(Clone)]
struct PyChannel {
    inner: KrausChannel,
}

#[pymethods]
impl PyChannel {
    #[new]
    fn new(kraus: Vec<PyMatrix>) -> PyResult<Self> {
        Ok(PyChannel { inner: KrausChannel::from_kraus(matrices(kraus)).map_err(err)? })
    }

    #[getter]
    fn in_dim(&self) -> usize {
        self.inner.in_dim()
    }

    #[getter]
    fn out_dim(&self) -> usize {
        self.inner.out_dim()
    }

    #[getter]
    fn kraus(&self) -> Vec<PyMatrix> {
        wrap_all(self.inner.kraus())
    }

    fn apply(&self, rho: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix { inner: self.inner.apply(&rho.inner).map_err(err)? })
    }

    /// `Σ E† N E`.
    fn wp(&self, n: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix { inner: self.inner.apply_adjoint(&n.inner).map_err(err)? })
    }

    fn choi(&self) -> PyMatrix {
        PyMatrix { inner: self.inner.choi() }
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &self.inner.validate(&Tolerances::default()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyChannel { inner: serde_json::from_str(s).map_err(json_err)? })
    }
}

#[pyclass(name = "Superoperator", module = "qwp")]
#[derive(Clone)]
struct PySuperop {
    inner: Superoperator,
}

#[pymethods]
impl PySuperop {
    /// `blocks[j][i]` maps input entry `i` to output entry `j`.
    #[new]
    fn new(in_sig: Vec<usize>, out_sig: Vec<usize>, blocks: Vec<Vec<PyChannel>>) -> PyResult<Self> {
        let blocks = blocks.into_iter().map(|r| r.into_iter().map(|c| c.inner).collect()).collect();
        Ok(PySuperop { inner: Superoperator::new(sig(in_sig)?, sig(out_sig)?, blocks).map_err(err)? })
    }

    #[staticmethod]
    fn from_channel(c: &PyChannel) -> Self {
        PySuperop { inner: Superoperator::from_channel(c.inner.clone()) }
    }

    #[staticmethod]
    fn identity(sig_dims: Vec<usize>) -> PyResult<Self> {
        Ok(PySuperop { inner: Superoperator::identity(&sig(sig_dims)?) })
    }

    #[getter]
    fn in_sig(&self) -> Vec<usize> {
        self.inner.in_sig().dims().to_vec()
    }

    #[getter]
    fn out_sig(&self) -> Vec<usize> {
        self.inner.out_sig().dims().to_vec()
    }

    fn apply(&self, s: &PyState) -> PyResult<PyState> {
        Ok(PyState { inner: self.inner.apply(&s.inner).map_err(err)? })
    }

    fn wp(&self, p: &PyPredicate) -> PyResult<PyPredicate> {
        Ok(PyPredicate { inner: wp::wp_super(&self.inner, &p.inner).map_err(err)? })
    }

    /// Raw pullback of Hermitian observables, one per output entry.
    fn wp_observable(&self, entries: Vec<PyMatrix>) -> PyResult<Vec<PyMatrix>> {
        let e = matrices(entries);
        let t = OperatorTuple::new(sig(e.iter().map(ComplexMatrix::rows).collect())?, e).map_err(err)?;
        Ok(wrap_all(wp::wp_operator(&self.inner, &t).map_err(err)?.entries()))
    }

    /// `self` first, then `next`.
    fn then(&self, next: &PySuperop) -> PyResult<Self> {
        Ok(PySuperop { inner: wp::seq_compose(&self.inner, &next.inner).map_err(err)? })
    }

    fn coproduct(&self, other: &PySuperop) -> Self {
        PySuperop { inner: wp::coproduct(&self.inner, &other.inner) }
    }

    fn choi_distance(&self, other: &PySuperop) -> f64 {
        self.inner.choi_distance(&other.inner)
    }

    #[pyo3(signature = (trials = 20, seed = 0))]
    fn duality_check<'py>(&self, py: Python<'py>, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &wp::duality_check(&self.inner, trials, seed))
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &self.inner.validate(&Tolerances::default()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PySuperop { inner: serde_json::from_str(s).map_err(json_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Superoperator({} -> {})", self.inner.in_sig(), self.inner.out_sig())
    }
}

#[pyclass(name = "Program", module = "qwp")]
#[derive(Clone)]
struct PyProgram {
    inner: qpl::Program,
}

#[pymethods]
impl PyProgram {
    #[staticmethod]
    fn parse(src: &str) -> PyResult<Self> {
        Ok(PyProgram { inner: qpl::parse(src).map_err(err)? })
    }

    /// Canonical source text.
    fn print(&self) -> String {
        qpl::print(&self.inner)
    }

    fn sexpr(&self) -> String {
        qpl::sexpr(&self.inner)
    }

    /// Over the declared inputs, or over a register of `register` qubits for
    /// a program without inputs. `depth` truncates loops and recursion.
    #[pyo3(signature = (register = None, tol = None, max_iter = None, depth = None))]
    fn elaborate(
        &self,
        register: Option<usize>,
        tol: Option<f64>,
        max_iter: Option<usize>,
        depth: Option<usize>,
    ) -> PyResult<PySuperop> {
        let d = ElabOptions::default();
        let opts = ElabOptions {
            tol: tol.unwrap_or(d.tol),
            max_iter: max_iter.unwrap_or(d.max_iter),
            depth,
        };
        let ctx = match register {
            Some(n) => TypingContext::register("r", n),
            None => TypingContext::from_decls(&self.inner.inputs),
        };
        let e = qpl::elaborate_with(&self.inner, &ctx, &opts).map_err(err)?;
        Ok(PySuperop { inner: e.op })
    }

    fn __repr__(&self) -> String {
        format!("Program({})", qpl::sexpr(&self.inner))
    }
}

#[pyfunction]
#[pyo3(signature = (m, n, tol = 1e-9))]
fn loewner_leq(m: &PyMatrix, n: &PyMatrix, tol: f64) -> PyResult<bool> {
    qwp_core::eigen::loewner_leq(&m.inner, &n.inner, tol).map_err(err)
}

#[pyfunction]
fn stabilizer_check(u: &PyMatrix, psi: &PyMatrix) -> PyResult<bool> {
    wp::stabilizer_check(&u.inner, &psi.inner).map_err(err)
}

#[pyfunction]
fn validate_predicate<'py>(py: Python<'py>, m: &PyMatrix) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &qwp_core::domain::validate_predicate_entry(&m.inner, &Tolerances::default()))
}

#[pyfunction]
fn coin_source() -> &'static str {
    library::COIN_SOURCE
}

#[pyfunction]
fn grover_source(n: usize, s: usize) -> PyResult<String> {
    library::grover_source(n, s).map_err(err)
}

#[pyfunction]
fn bell_source() -> &'static str {
    library::BELL_SOURCE
}

#[pyfunction]
fn uniform_superposition(n: usize) -> PyMatrix {
    PyMatrix { inner: library::uniform_superposition(n) }
}

/// Bell circuit data: unitary, generators, expected preconditions, states.
#[pyfunction]
fn bell_stabilizer(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let b = library::build_bell_stabilizer();
    let d = PyDict::new(py);
    d.set_item("program", PyProgram { inner: b.program })?;
    d.set_item("unitary", PyMatrix { inner: b.unitary })?;
    d.set_item("generators", wrap_all(&b.generators))?;
    d.set_item("expected_wp", wrap_all(&b.expected_wp))?;
    d.set_item("bell_state", PyMatrix { inner: b.bell_state })?;
    d.set_item("input_state", PyMatrix { inner: b.input_state })?;
    Ok(d)
}

#[pymodule]
fn qwp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("QwpException", py.get_type::<QwpException>())?;
    m.add("ProgramError", py.get_type::<ProgramError>())?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("NonConvergentError", py.get_type::<NonConvergentError>())?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyPredicate>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PySuperop>()?;
    m.add_class::<PyProgram>()?;
    m.add_function(wrap_pyfunction!(loewner_leq, m)?)?;
    m.add_function(wrap_pyfunction!(stabilizer_check, m)?)?;
    m.add_function(wrap_pyfunction!(validate_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(coin_source, m)?)?;
    m.add_function(wrap_pyfunction!(grover_source, m)?)?;
    m.add_function(wrap_pyfunction!(bell_source, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_superposition, m)?)?;
    m.add_function(wrap_pyfunction!(bell_stabilizer, m)?)?;
    Ok(())
}
