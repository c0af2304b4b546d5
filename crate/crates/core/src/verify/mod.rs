//! Verification suite: model-level theorem checks and the invariants of the
//! other modules, each reported as a [`CheckReport`].

mod invariants;
mod theorems;
pub mod thresholds;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ends::SurfaceEnds;
use crate::error::{Error, Result};
use crate::specfun::EvalOptions;

pub use theorems::{
    factorization_residual, half_point_check, poisson_asymptotics_check, symbol_asymptotics_check, symbol_slope,
    HALF_POINT_MODES, HALF_POINT_RADIUS, MAX_FIT_CONDITION,
};
pub use invariants::{
    brute_force_count, lattice_winding_mismatches, sample_s, ConstructedFamily, GRID_EXCLUSION, V0_MAX_FREQUENCY,
};
pub use thresholds::{threshold, THRESHOLDS};

/// Seed of every random grid in the suite.
pub const DEFAULT_SEED: u64 = 0x7e57_5ca7;

/// Outcome of one check. `passed` is `measured <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    #[serde(skip)]
    pub details: String,
}

impl CheckReport {
    /// Report for `name` against its registered threshold.
    pub fn new(name: &str, measured: f64, details: impl Into<String>) -> Self {
        let threshold = threshold(name);
        Self {
            name: name.to_string(),
            passed: measured <= threshold,
            measured,
            threshold,
            details: details.into(),
        }
    }

    /// A check that could not be carried out.
    pub fn failed(name: &str, reason: impl Into<String>) -> Self {
        Self::new(name, f64::INFINITY, reason)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} measured={:e} threshold={:e}", self.name, self.measured, self.threshold)?;
        if !self.details.is_empty() {
            write!(f, " ({})", self.details)?;
        }
        Ok(())
    }
}

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Specfun,
    Ends,
    Funnel,
    Cusp,
    Weierstrass,
    Gs,
    Theorems,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = ["all", "specfun", "ends", "funnel", "cusp", "weierstrass", "gs", "verify"];

    fn includes(&self, prefix: &str) -> bool {
        match self {
            Suite::All => true,
            Suite::Specfun => prefix == "specfun",
            Suite::Ends => prefix == "ends",
            Suite::Funnel => prefix == "funnel",
            Suite::Cusp => prefix == "cusp",
            Suite::Weierstrass => prefix == "weierstrass",
            Suite::Gs => prefix == "gs",
            Suite::Theorems => prefix == "verify",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "specfun" => Suite::Specfun,
            "ends" => Suite::Ends,
            "funnel" => Suite::Funnel,
            "cusp" => Suite::Cusp,
            "weierstrass" => Suite::Weierstrass,
            "gs" => Suite::Gs,
            "verify" => Suite::Theorems,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Knobs of a suite run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub eval: EvalOptions,
    pub seed: u64,
    /// Test hook: multiplies every scattering coefficient seen by the suite
    /// by (1 + delta s), which breaks the functional equation.
    pub beta_perturbation: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { eval: EvalOptions::default(), seed: DEFAULT_SEED, beta_perturbation: None }
    }
}

impl SuiteOptions {
    pub(crate) fn perturb(&self, s: Complex64, value: Complex64) -> Complex64 {
        match self.beta_perturbation {
            Some(delta) => value * (1.0 + delta * s),
            None => value,
        }
    }
}

type CheckFn<'a> = Box<dyn Fn() -> CheckReport + Send + Sync + 'a>;

/// Runs the selected checks. Funnel-dependent checks are skipped when there
/// are no funnels and cusp checks when there are no cusps. Reports come back
/// in declaration order.
pub fn run_suite(ends: &SurfaceEnds, suite: Suite, opts: &SuiteOptions) -> Vec<CheckReport> {
    let checks: Vec<(&'static str, CheckFn<'_>)> = invariants::registry(ends, opts);
    checks
        .into_par_iter()
        .filter(|(name, _)| suite.includes(name.split('.').next().unwrap_or("")))
        .map(|(_, check)| check())
        .collect()
}

/// Names of all checks that `run_suite` would run for these ends.
pub fn registered_checks(ends: &SurfaceEnds) -> Vec<&'static str> {
    invariants::registry(ends, &SuiteOptions::default()).into_iter().map(|(n, _)| n).collect()
}
