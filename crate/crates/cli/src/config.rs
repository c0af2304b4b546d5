//! JSON configuration: the surface ends, evaluation overrides and test hooks.
//!
//! Lengths are numbers or expressions such as `"2pi"`, `"pi/3"` or `"1.5*pi"`;
//! phases are numbers or strings, where `"p/q"` is kept as an exact rational.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tscat_core::ends::{CuspTwist, FunnelTwist, Phase, SurfaceEnds};
use tscat_core::verify::{SuiteOptions, DEFAULT_SEED};
use tscat_core::{EvalOptions, Error, Result};

/// Environment variable overriding `eval.rel_tol`.
pub const EVAL_TOL_ENV: &str = "TS_EVAL_TOL";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Number(x) => write!(f, "{x}"),
            Scalar::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunnelConfig {
    pub length: Scalar,
    pub phases: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspConfig {
    pub phases: Vec<Scalar>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestHooks {
    /// Multiplies the scattering coefficients seen by `verify` by (1 + delta s).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_perturbation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub funnels: Vec<FunnelConfig>,
    #[serde(default)]
    pub cusps: Vec<CuspConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_hooks: Option<TestHooks>,
}

impl Default for Config {
    /// One funnel of length 2 pi with trivial twist and one untwisted cusp.
    fn default() -> Self {
        Self {
            funnels: vec![FunnelConfig { length: Scalar::Text("2pi".into()), phases: vec![Scalar::Number(0.0)] }],
            cusps: vec![CuspConfig { phases: vec![Scalar::Number(0.0)] }],
            eval: None,
            seed: None,
            test_hooks: None,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.ends()?;
        cfg.eval_options()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn ends(&self) -> Result<SurfaceEnds> {
        let funnels = self
            .funnels
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let phases = f.phases.iter().map(parse_phase).collect::<Result<Vec<_>>>()?;
                FunnelTwist::new(parse_length(&f.length)?, phases)
                    .map_err(|e| Error::InvalidInput(format!("funnel {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let cusps = self
            .cusps
            .iter()
            .map(|c| c.phases.iter().map(parse_phase).collect::<Result<Vec<_>>>().map(CuspTwist::new))
            .collect::<Result<Vec<_>>>()?;
        SurfaceEnds::new(funnels, cusps)
    }

    /// Evaluation options after the `TS_EVAL_TOL` override.
    pub fn eval_options(&self) -> Result<EvalOptions> {
        let mut opts = self.eval.unwrap_or_default();
        if let Ok(v) = std::env::var(EVAL_TOL_ENV) {
            opts.rel_tol = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{EVAL_TOL_ENV}={v:?} is not a number")))?;
        }
        opts.validate()?;
        Ok(opts)
    }

    pub fn suite_options(&self) -> Result<SuiteOptions> {
        Ok(SuiteOptions {
            eval: self.eval_options()?,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            beta_perturbation: self.test_hooks.as_ref().and_then(|h| h.beta_perturbation),
        })
    }
}

/// `x`, `pi`, `2pi`, `2*pi`, `pi/3`, `1.5*pi/2`.
pub fn parse_length(v: &Scalar) -> Result<f64> {
    let bad = || Error::InvalidInput(format!("cannot parse length {v}"));
    let x = match v {
        Scalar::Number(x) => *x,
        Scalar::Text(s) => {
            let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
            if let Some(pos) = s.find("pi") {
                let coef = s[..pos].trim_end_matches('*');
                let coef = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| bad())? };
                let rest = &s[pos + 2..];
                let div = match rest.strip_prefix('/') {
                    Some(d) => d.parse::<f64>().map_err(|_| bad())?,
                    None if rest.is_empty() => 1.0,
                    None => return Err(bad()),
                };
                coef * PI / div
            } else {
                s.parse::<f64>().map_err(|_| bad())?
            }
        }
    };
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::InvalidInput(format!("length must be positive and finite, got {v}")))
    }
}

/// Numbers become float phases; `"p/q"` strings exact rationals.
pub fn parse_phase(v: &Scalar) -> Result<Phase> {
    match v {
        Scalar::Number(x) if *x == 0.0 => Ok(Phase::zero()),
        Scalar::Number(x) => Phase::float(*x),
        Scalar::Text(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => {
                    let p = p.trim().parse::<i64>();
                    let q = q.trim().parse::<i64>();
                    match (p, q) {
                        (Ok(p), Ok(q)) => Phase::rational(p, q),
                        _ => Err(Error::InvalidInput(format!("cannot parse phase {v}"))),
                    }
                }
                None => {
                    let x = s.parse::<f64>().map_err(|_| Error::InvalidInput(format!("cannot parse phase {v}")))?;
                    parse_phase(&Scalar::Number(x))
                }
            }
        }
    }
}
