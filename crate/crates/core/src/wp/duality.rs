//! Sampled check of `⟨wp(F)(P), s⟩ = ⟨P, F(s)⟩`.

use serde::{Deserialize, Serialize};

use crate::domain::{Superoperator, Violation};
use crate::random::Sampler;
use crate::tolerance::EQ_TOL;
use crate::wp::transformer::wp_operator;

pub const DUALITY_CODE: &str = "duality_residual";

/// Outcome of a duality sampling run; same wire shape as a validation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub pass: bool,
    pub max_residual: f64,
    pub trials: usize,
    pub violations: Vec<Violation>,
}

/// Draws `trials` random (state, predicate) pairs from a seeded stream and
/// compares both sides of the pairing; passes iff every residual is at most
/// `1e-9`. Zero trials never pass.
pub fn duality_check(f: &Superoperator, trials: usize, seed: u64) -> DualityReport {
    let mut sampler = Sampler::seeded(seed);
    let mut report = DualityReport {
        pass: trials > 0,
        max_residual: 0.0,
        trials,
        violations: Vec::new(),
    };
    for t in 0..trials {
        let s = sampler.density_state(f.in_sig());
        let p = sampler.predicate(f.out_sig());
        let residual = residual(f, &s, &p);
        if !(residual <= report.max_residual) {
            report.max_residual = residual;
        }
        if !(residual <= EQ_TOL) {
            report.pass = false;
            report.violations.push(Violation {
                code: DUALITY_CODE.into(),
                message: format!("trial {t}: |⟨wp(F)(P), s⟩ − ⟨P, F(s)⟩| = {residual:e}"),
                witness: residual,
            });
        }
    }
    report
}

/// `|⟨wp(F)(P), s⟩ − ⟨P, F(s)⟩|`, computed through independent backward
/// and forward evaluations.
pub fn residual(f: &Superoperator, s: &crate::domain::OperatorTuple, p: &crate::domain::OperatorTuple) -> f64 {
    let backward = wp_operator(f, p).and_then(|w| w.pairing(s));
    let forward = f.apply_tuple(s).and_then(|o| p.pairing(&o));
    match (backward, forward) {
        (Ok(b), Ok(a)) => (b - a).abs(),
        _ => f64::INFINITY,
    }
}
