//! Hermitian eigendecomposition and the positivity / Löwner-order primitives.
//!
//! The decomposition is a cyclic complex Jacobi sweep. Each rotation first
//! removes the phase of the pivot `a_pq` with a diagonal unitary, then applies
//! a real Givens rotation, so the accumulated transform stays exactly unitary
//! up to roundoff. Dimensions in this crate stay below ~64, where Jacobi is
//! both accurate and fast enough.

use num_complex::Complex64;

use crate::error::{QwpError, Result};
use crate::matrix::{ComplexMatrix, ZERO};
use crate::tolerance::HERM_TOL;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenResult {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Column `k` as a column vector.
    pub fn eigenvector(&self, k: usize) -> ComplexMatrix {
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(v.rows(), 1, |i, _| v.get(i, k))
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            self.eigenvalues
                .iter()
                .enumerate()
                .map(|(k, &l)| v.get(i, k) * v.get(j, k).conj() * l)
                .sum()
        })
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(QwpError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let deviation = a.hermitian_deviation();
    if deviation > HERM_TOL {
        return Err(QwpError::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// `(A + A†)/2` first.
pub fn herm_eigen(a: &ComplexMatrix) -> Result<EigenResult> {
    check_hermitian(a)?;
    Ok(jacobi(&a.hermitian_part()))
}

/// Eigenvalues only, ascending.
pub fn herm_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    herm_eigen(a).map(|e| e.eigenvalues)
}

fn jacobi(a: &ComplexMatrix) -> EigenResult {
    let n = a.rows();
    let mut m: Vec<Complex64> = a.entries().to_vec();
    let mut v: Vec<Complex64> = ComplexMatrix::identity(n).entries().to_vec();
    let idx = |i: usize, j: usize| i * n + j;

    let scale = a.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[idx(i, j)].norm_sqr())
                .sum();
            if off.sqrt() <= f64::EPSILON * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = m[idx(p, q)];
                    let mag = apq.norm();
                    if mag == 0.0 {
                        continue;
                    }
                    let app = m[idx(p, p)].re;
                    let aqq = m[idx(q, q)].re;
                    // pivot negligible relative to both diagonal entries
                    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                        m[idx(p, q)] = ZERO;
                        m[idx(q, p)] = ZERO;
                        continue;
                    }
                    let theta = (aqq - app) / (2.0 * mag);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    let phase = apq / mag; // e^{iφ}
                    let phase_c = phase.conj();
                    // W restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                    let w_pp = Complex64::new(c, 0.0);
                    let w_pq = Complex64::new(s, 0.0);
                    let w_qp = phase_c * (-s);
                    let w_qq = phase_c * c;
                    // columns: M ← M W
                    for k in 0..n {
                        let mkp = m[idx(k, p)];
                        let mkq = m[idx(k, q)];
                        m[idx(k, p)] = mkp * w_pp + mkq * w_qp;
                        m[idx(k, q)] = mkp * w_pq + mkq * w_qq;
                        let vkp = v[idx(k, p)];
                        let vkq = v[idx(k, q)];
                        v[idx(k, p)] = vkp * w_pp + vkq * w_qp;
                        v[idx(k, q)] = vkp * w_pq + vkq * w_qq;
                    }
                    // rows: M ← W† M
                    for k in 0..n {
                        let mpk = m[idx(p, k)];
                        let mqk = m[idx(q, k)];
                        m[idx(p, k)] = w_pp.conj() * mpk + w_qp.conj() * mqk;
                        m[idx(q, k)] = w_pq.conj() * mpk + w_qq.conj() * mqk;
                    }
                    m[idx(p, q)] = ZERO;
                    m[idx(q, p)] = ZERO;
                    m[idx(p, p)] = Complex64::new(m[idx(p, p)].re, 0.0);
                    m[idx(q, q)] = Complex64::new(m[idx(q, q)].re, 0.0);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[idx(i, i)].re.total_cmp(&m[idx(j, j)].re));
    let eigenvalues = order.iter().map(|&k| m[idx(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[idx(i, order[j])]);
    EigenResult {
        eigenvalues,
        eigenvectors,
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    herm_eigen(a).map(|e| e.min())
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(a)? >= -tol)
}

/// Löwner order: `M ≼ N` iff `N − M` is positive semidefinite.
pub fn loewner_leq(m: &ComplexMatrix, n: &ComplexMatrix, tol: f64) -> Result<bool> {
    if m.rows() != n.rows() || m.cols() != n.cols() {
        return Err(QwpError::DimensionMismatch(format!(
            "Löwner comparison of {}x{} with {}x{}",
            m.rows(),
            m.cols(),
            n.rows(),
            n.cols()
        )));
    }
    check_hermitian(m)?;
    check_hermitian(n)?;
    is_psd(&(n - m), tol)
}
