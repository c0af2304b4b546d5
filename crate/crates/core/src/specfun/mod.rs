//! Complex special functions: Gamma and friends, the regularized Gauss
//! hypergeometric function, modified Bessel functions of complex order and a
//! few elementary helpers.
//!
//! Every function is pure; the only configuration is an immutable
//! [`EvalOptions`].

mod bessel;
mod elementary;
mod gamma;
mod hypergeometric;
mod sum;

pub use bessel::{bessel_i, bessel_k, bessel_k_integral, bessel_k_reflection};
pub use elementary::{e2_factor, japanese_bracket, log_e2};
pub use gamma::{gamma, log_gamma, polygamma, rgamma};
pub(crate) use gamma::sin_pi;
pub use hypergeometric::{regularized_2f1, regularized_2f1_series, regularized_2f1_with_complement};
pub use sum::KahanSum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by all series and pole checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalOptions {
    /// Relative truncation target for series.
    pub rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Minimum distance to a known pole before an operation refuses.
    pub pole_exclusion: f64,
    /// Use the `nu +/- eps` limit for K at (near-)integer orders. When
    /// disabled, such orders are rejected with `NearIntegerOrder`.
    pub integer_order_limit: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 20_000,
            pole_exclusion: 1e-6,
            integer_order_limit: true,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidInput(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidInput("max_terms must be at least 1".into()));
        }
        if !(self.pole_exclusion > 0.0 && self.pole_exclusion.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "pole_exclusion must be positive, got {}",
                self.pole_exclusion
            )));
        }
        Ok(())
    }
}

/// Distance from `z` to the set of non-positive integers.
pub(crate) fn dist_to_nonpositive_integers(z: num_complex::Complex64) -> f64 {
    let n = if z.re >= 0.0 { 0.0 } else { z.re.round() };
    (z - n).norm()
}
