//! Numerical tolerances shared by every module.

/// Maximum entrywise asymmetry `‖A − A†‖_max` accepted as Hermitian.
pub const HERM_TOL: f64 = 1e-10;
/// Slack on eigenvalue bounds (positivity and the predicate upper bound).
pub const PSD_TOL: f64 = 1e-9;
/// Entrywise equality tolerance.
pub const EQ_TOL: f64 = 1e-9;
/// Slack on the total trace of a state.
pub const TRACE_TOL: f64 = 1e-9;
/// Default truncation tolerance for the infinite sums of iteration and recursion.
pub const TRUNCATION_TOL: f64 = 1e-10;
/// Default iteration cap for iteration and recursion.
pub const MAX_ITER: usize = 100_000;

/// Tolerance bundle used by validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: HERM_TOL,
            psd: PSD_TOL,
            trace: TRACE_TOL,
        }
    }
}

impl Tolerances {
    pub fn with_psd(psd: f64) -> Self {
        Tolerances {
            psd,
            ..Tolerances::default()
        }
    }
}
