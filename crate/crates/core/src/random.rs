//! Seeded random generators for states, predicates, channels and superoperators.
//!
//! Used by duality sampling and by the property tests. Every generator draws
//! from a ChaCha stream, so a seed fixes the whole sequence.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domain::{
    DensityState, KrausChannel, OperatorTuple, PredicateTuple, Signature, Superoperator,
};
use crate::eigen::herm_eigen;
use crate::matrix::{ComplexMatrix, ZERO};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn seeded(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im)
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        let data = (0..rows * cols).map(|_| self.complex_gaussian()).collect();
        ComplexMatrix::new(rows, cols, data).expect("finite samples")
    }

    pub fn hermitian(&mut self, d: usize) -> ComplexMatrix {
        self.gaussian_matrix(d, d).hermitian_part()
    }

    /// `G G†` with `G` of random rank between 1 and `d`.
    pub fn psd(&mut self, d: usize) -> ComplexMatrix {
        let rank = self.range(1, d);
        let g = self.gaussian_matrix(d, rank);
        (&g * &g.adjoint()).hermitian_part()
    }

    /// Haar-like unitary from Gram–Schmidt on a Gaussian matrix.
    pub fn unitary(&mut self, d: usize) -> ComplexMatrix {
        let g = self.gaussian_matrix(d, d);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v: Vec<Complex64> = (0..d).map(|i| g.get(i, j)).collect();
            for _ in 0..2 {
                for u in &cols {
                    let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= dot * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
    }

    /// Normalized column vector.
    pub fn pure_state(&mut self, d: usize) -> ComplexMatrix {
        let g = self.gaussian_matrix(d, 1);
        g.scale_real(1.0 / g.frobenius_norm())
    }

    pub fn signature(&mut self, max_len: usize, max_dim: usize) -> Signature {
        let len = self.range(1, max_len);
        Signature::new((0..len).map(|_| self.range(1, max_dim)).collect()).expect("positive")
    }

    /// Random state over `sig`; total trace is 1 half of the time, otherwise
    /// uniform in (0, 1].
    pub fn density_state(&mut self, sig: &Signature) -> DensityState {
        let total = if self.coin(0.5) { 1.0 } else { 1.0 - self.uniform() };
        self.density_state_with_trace(sig, total)
    }

    pub fn density_state_with_trace(&mut self, sig: &Signature, total: f64) -> DensityState {
        let raw: Vec<ComplexMatrix> = sig
            .dims()
            .iter()
            .map(|&d| {
                if sig.len() > 1 && self.coin(0.15) {
                    ComplexMatrix::zeros(d, d)
                } else {
                    self.psd(d).scale_real(self.uniform() + 1e-3)
                }
            })
            .collect();
        let sum: f64 = raw.iter().map(|m| m.trace().unwrap().re).sum();
        let entries = if sum > 0.0 {
            raw.iter().map(|m| m.scale_real(total / sum)).collect()
        } else {
            let mut e = raw;
            let d = sig.dim(0);
            e[0] = ComplexMatrix::identity(d).scale_real(total / d as f64);
            e
        };
        let t = OperatorTuple::new(sig.clone(), entries).expect("shapes follow signature");
        DensityState::from_tuple(t).expect("sampled state is valid")
    }

    /// Random predicate entry: positive with largest eigenvalue in [0, 1].
    pub fn predicate_entry(&mut self, d: usize) -> ComplexMatrix {
        match self.range(0, 9) {
            0 => ComplexMatrix::zeros(d, d),
            1 => ComplexMatrix::identity(d),
            2 => {
                let v = self.pure_state(d);
                ComplexMatrix::projector(&v).hermitian_part()
            }
            _ => {
                let p = self.psd(d);
                let top = herm_eigen(&p).expect("Hermitian").max();
                p.scale_real(self.uniform() / top).hermitian_part()
            }
        }
    }

    pub fn predicate(&mut self, sig: &Signature) -> PredicateTuple {
        let entries = sig.dims().iter().map(|&d| self.predicate_entry(d)).collect();
        PredicateTuple::new(sig.clone(), entries).expect("sampled predicate is valid")
    }

    /// Channel with `n_kraus` operators; trace preserving when requested and
    /// `n_kraus · out_dim ≥ in_dim`, otherwise `Σ E†E` has largest eigenvalue
    /// in (0, 1].
    pub fn channel(
        &mut self,
        in_dim: usize,
        out_dim: usize,
        n_kraus: usize,
        trace_preserving: bool,
    ) -> KrausChannel {
        let raw: Vec<ComplexMatrix> = (0..n_kraus)
            .map(|_| self.gaussian_matrix(out_dim, in_dim))
            .collect();
        let column = self.normalize_column(vec![raw], in_dim, trace_preserving);
        KrausChannel::new(in_dim, out_dim, column.into_iter().next().unwrap())
            .expect("shapes are consistent")
    }

    /// Random valid superoperator with up to `max_kraus` operators per block;
    /// about one block in five is the zero map.
    pub fn superoperator(
        &mut self,
        in_sig: &Signature,
        out_sig: &Signature,
        max_kraus: usize,
    ) -> Superoperator {
        let mut columns: Vec<Vec<Vec<ComplexMatrix>>> = Vec::with_capacity(in_sig.len());
        for i in 0..in_sig.len() {
            let din = in_sig.dim(i);
            let mut raw: Vec<Vec<ComplexMatrix>> = (0..out_sig.len())
                .map(|j| {
                    if self.coin(0.2) {
                        Vec::new()
                    } else {
                        let n = self.range(1, max_kraus);
                        (0..n)
                            .map(|_| self.gaussian_matrix(out_sig.dim(j), din))
                            .collect()
                    }
                })
                .collect();
            if raw.iter().all(Vec::is_empty) {
                let j = self.range(0, out_sig.len() - 1);
                raw[j] = vec![self.gaussian_matrix(out_sig.dim(j), din)];
            }
            let tp = self.coin(0.5);
            columns.push(self.normalize_column(raw, din, tp));
        }
        let blocks = (0..out_sig.len())
            .map(|j| {
                (0..in_sig.len())
                    .map(|i| {
                        KrausChannel::new(in_sig.dim(i), out_sig.dim(j), columns[i][j].clone())
                            .expect("shapes are consistent")
                    })
                    .collect()
            })
            .collect();
        Superoperator::new(in_sig.clone(), out_sig.clone(), blocks).expect("shapes are consistent")
    }

    /// Rescales the operators of one input column so that `Σ E†E ≼ I`.
    fn normalize_column(
        &mut self,
        raw: Vec<Vec<ComplexMatrix>>,
        din: usize,
        trace_preserving: bool,
    ) -> Vec<Vec<ComplexMatrix>> {
        let mut gram = ComplexMatrix::zeros(din, din);
        for e in raw.iter().flatten() {
            gram = &gram + &(&e.adjoint() * e);
        }
        let gram = gram.hermitian_part();
        let eig = herm_eigen(&gram).expect("Gram matrix is Hermitian");
        let well_conditioned = eig.min() > 1e-6 * eig.max();
        let isotropic = trace_preserving || self.coin(0.5);
        let right = if well_conditioned && isotropic {
            // Σ E†E = c·I with T = c^{1/2} S^{-1/2}
            let c = if trace_preserving { 1.0 } else { 1.0 - self.uniform() };
            let v = &eig.eigenvectors;
            ComplexMatrix::from_fn(din, din, |a, b| {
                let mut acc = ZERO;
                for (k, &l) in eig.eigenvalues.iter().enumerate() {
                    acc += v.get(a, k) * v.get(b, k).conj() * (c / l).sqrt();
                }
                acc
            })
        } else {
            let c = 1.0 - self.uniform();
            ComplexMatrix::identity(din).scale_real((c / eig.max()).sqrt())
        };
        raw.into_iter()
            .map(|r| r.into_iter().map(|e| &e * &right).collect())
            .collect()
    }
}
