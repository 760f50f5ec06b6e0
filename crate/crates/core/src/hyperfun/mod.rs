//! Hypergeometric machinery: Pochhammer symbols, Gauss 2F1, Horn H3,
//! Kampé de Fériet F^{1:1;0}_{1:1;1} and the triple series A2^(3) with its
//! derivative and expansion formulas.
//!
//! Every evaluator returns a [`SeriesResult`] carrying an error estimate that
//! covers both truncation and accumulated rounding.

mod a2;
mod accel;
mod gamma;
mod gauss;
mod h3;
mod kdf;
mod shifted;

pub use a2::{
    a2_3, a2_3_direct, a2_3_expansion, a2_3_integral, a2_3_partial_derivative, a2_3_transformed, contiguous_relation,
    expansion_core, A2Params,
};
pub use accel::levin_u;
pub use gamma::{gamma, ln_gamma, pochhammer, rgamma};
pub use gauss::gauss_2f1;
pub use h3::{h3, h3_direct};
pub use kdf::kdf_1_1_0;
pub use shifted::ShiftedGauss;

use serde::{Deserialize, Serialize};

/// Value of a truncated series together with a bound on its error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
}

impl SeriesResult {
    pub fn exact(value: f64) -> Self {
        SeriesResult {
            value,
            abs_error_estimate: 0.0,
            terms_used: 1,
        }
    }

    /// Multiply by a factor known to relative accuracy `rel`.
    pub(crate) fn scaled(self, factor: f64, rel: f64) -> Self {
        let value = self.value * factor;
        SeriesResult {
            value,
            abs_error_estimate: self.abs_error_estimate * factor.abs() + rel * value.abs(),
            terms_used: self.terms_used,
        }
    }
}

/// Truncation controls shared by all series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesConfig {
    /// Target relative accuracy of a sum.
    pub rel_tol: f64,
    /// Absolute floor below which a sum is considered converged.
    pub abs_tol: f64,
    /// Cap on the number of terms along one index of a direct power series.
    pub max_terms_per_axis: usize,
    /// Cap on the slowly convergent outer index of the expansion formula.
    /// Past this many terms the remainder is extrapolated by a Levin transform.
    pub max_terms_outer: usize,
    /// Distance to a non-positive integer below which a gamma argument is a pole.
    pub pole_guard: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_terms_per_axis: 500,
            max_terms_outer: 400_000,
            pole_guard: 1e-8,
        }
    }
}

impl SeriesConfig {
    pub(crate) fn tol(&self, scale: f64) -> f64 {
        (self.rel_tol * scale.abs()).max(self.abs_tol)
    }
}

pub(crate) const EPS: f64 = f64::EPSILON;

/// Distance from `x` to the nearest non-positive integer, or infinity if `x > 0.5`.
pub(crate) fn dist_to_nonpos_int(x: f64) -> f64 {
    if x > 0.5 {
        f64::INFINITY
    } else {
        (x - x.round()).abs()
    }
}

/// `Some(n)` when `x` is exactly a non-positive integer `-n`.
pub(crate) fn nonpos_int(x: f64) -> Option<u64> {
    if x <= 0.0 && x == x.round() && x > -1e15 {
        Some((-x) as u64)
    } else {
        None
    }
}
