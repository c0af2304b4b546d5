use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use tscat_core::ends::{cusp_resonances, funnel_resonances, SurfaceEnds};
use tscat_core::funnel::{
    poisson_coeff, reduced_smatrix_coeff, smatrix_coeff, symbol_leading, FunnelMode,
};
use tscat_core::gs::{scalar_winding, scattering_pole_multiplicity, Contour};
use tscat_core::verify::{run_suite, Suite};
use tscat_core::weierstrass::{counting_function, product_eval, ResonanceMultiset, TruncatedProduct};
use tscat_core::{EvalOptions, Error, Result};

use crate::config::Config;
use crate::format::{csv_row, g17};

/// Text to emit and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Exit code for an error: 2 for bad input, 3 for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// `funnel:i`, `cusp:i` or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndSelector {
    All,
    Funnel(usize),
    Cusp(usize),
}

impl FromStr for EndSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(EndSelector::All);
        }
        let (kind, idx) = s.split_once(':').ok_or_else(|| invalid(format!("bad end selector {s:?}")))?;
        let idx: usize = idx.parse().map_err(|_| invalid(format!("bad end index in {s:?}")))?;
        match kind {
            "funnel" => Ok(EndSelector::Funnel(idx)),
            "cusp" => Ok(EndSelector::Cusp(idx)),
            _ => Err(invalid(format!("bad end selector {s:?}; expected funnel:i, cusp:i or all"))),
        }
    }
}

/// Eigenbasis index and Fourier mode, written `j:k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSpec {
    pub j: usize,
    pub k: i64,
}

impl FromStr for ModeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(format!("bad mode {s:?}; expected j:k"));
        let (j, k) = s.split_once(':').ok_or_else(bad)?;
        Ok(ModeSpec { j: j.trim().parse().map_err(|_| bad())?, k: k.trim().parse().map_err(|_| bad())? })
    }
}

/// `a:b:n`, n equally spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.a];
        }
        (0..self.n).map(|i| self.a + (self.b - self.a) * i as f64 / (self.n - 1) as f64).collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(format!("bad range {s:?}; expected a:b:n"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if n == 0 || !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        Ok(Range { a, b, n })
    }
}

/// `a+bi`, `a-bi`, `a`, `bi` or `a,b`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || invalid(format!("bad complex number {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im))
}

fn funnel_mode(ends: &SurfaceEnds, funnel: usize, mode: ModeSpec) -> Result<FunnelMode> {
    let f = ends
        .funnels
        .get(funnel)
        .ok_or_else(|| invalid(format!("funnel {funnel} does not exist ({} configured)", ends.n_f())))?;
    f.mode(mode.j, mode.k)
}

fn resonance_csv(ms: &ResonanceMultiset) -> String {
    let mut out = csv_row(&["re".into(), "im".into(), "multiplicity".into()]);
    if ms.m0() > 0 {
        out.push_str(&csv_row(&[g17(0.0), g17(0.0), ms.m0().to_string()]));
    }
    for (p, m) in ms.iter() {
        // Adding 0.0 turns -0 into 0.
        out.push_str(&csv_row(&[g17(p.re + 0.0), g17(p.im + 0.0), m.to_string()]));
    }
    out
}

pub fn resonances(cfg: &Config, end: EndSelector, radius: Option<f64>, mode: Option<ModeSpec>) -> Result<Outcome> {
    let ends = cfg.ends()?;
    if let Some(r) = radius {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(invalid(format!("radius must be nonnegative, got {r}")));
        }
    }
    let need_radius = || radius.ok_or_else(|| invalid("--radius is required for funnel ends"));
    let ms = match (end, mode) {
        (EndSelector::Funnel(i), Some(m)) => {
            let r = need_radius()?;
            ResonanceMultiset::from_points(funnel_mode(&ends, i, m)?.lattice_within(r))
        }
        (_, Some(_)) => return Err(invalid("--mode applies to funnel ends only")),
        (EndSelector::Funnel(i), None) => {
            let f = ends.funnels.get(i).ok_or_else(|| invalid(format!("funnel {i} does not exist")))?;
            funnel_resonances(f, need_radius()?)
        }
        (EndSelector::Cusp(i), None) => {
            let c = ends.cusps.get(i).ok_or_else(|| invalid(format!("cusp {i} does not exist")))?;
            let ms = cusp_resonances(c);
            match radius {
                Some(r) => ms.within(r),
                None => ms,
            }
        }
        (EndSelector::All, None) => ends.resonances(need_radius()?),
    };
    Ok(Outcome::ok(resonance_csv(&ms)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridOp {
    Smatrix,
    Reduced,
    Symbol,
    Poisson,
    Product,
}

impl FromStr for GridOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "smatrix" => GridOp::Smatrix,
            "reduced" => GridOp::Reduced,
            "symbol" => GridOp::Symbol,
            "poisson" => GridOp::Poisson,
            "product" => GridOp::Product,
            _ => return Err(invalid(format!("unknown op {s:?}; expected smatrix, reduced, symbol, poisson or product"))),
        })
    }
}

/// Everything `grid` needs besides the config.
#[derive(Debug, Clone, Default)]
pub struct GridArgs {
    pub funnel: usize,
    pub mode: Option<ModeSpec>,
    /// Funnel radius r, for `poisson`.
    pub r: Option<f64>,
    /// Truncation radius of the product over the funnel resonances.
    pub radius: Option<f64>,
    /// CSV file `re,im,multiplicity` with the product's multiset.
    pub multiset: Option<std::path::PathBuf>,
}

/// Reads a multiset in the format written by `resonances`.
pub fn read_multiset(path: &Path) -> Result<ResonanceMultiset> {
    let text =
        std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (n == 0 && line.starts_with("re")) {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || invalid(format!("{}:{}: expected re,im,multiplicity", path.display(), n + 1));
        if cells.len() != 3 {
            return Err(bad());
        }
        let re: f64 = cells[0].parse().map_err(|_| bad())?;
        let im: f64 = cells[1].parse().map_err(|_| bad())?;
        let m: usize = cells[2].parse().map_err(|_| bad())?;
        points.push((Complex64::new(re, im), m));
    }
    Ok(ResonanceMultiset::from_points(points))
}

/// True for errors that mark a grid node inside an exclusion ball.
fn excluded(e: &Error) -> bool {
    matches!(e, Error::PoleProximity { .. } | Error::HalfPole { .. } | Error::OnSingularSet { .. })
}

pub fn grid(cfg: &Config, op: GridOp, re: Range, im: Range, args: &GridArgs) -> Result<Outcome> {
    let ends = cfg.ends()?;
    let opts = cfg.eval_options()?;
    let eval: Box<dyn Fn(Complex64) -> Result<Complex64> + Sync> = match op {
        GridOp::Product => {
            let p = match (&args.multiset, args.radius) {
                (Some(path), _) => {
                    let ms = read_multiset(path)?;
                    let radius = ms.iter().map(|(p, _)| p.norm()).fold(1.0, f64::max);
                    TruncatedProduct::new(ms, radius)?
                }
                (None, Some(r)) => {
                    let f = ends
                        .funnels
                        .get(args.funnel)
                        .ok_or_else(|| invalid(format!("funnel {} does not exist", args.funnel)))?;
                    TruncatedProduct::funnel(f, r)?
                }
                (None, None) => return Err(invalid("product needs --multiset or --radius")),
            };
            Box::new(move |s| Ok(product_eval(&p, s)))
        }
        _ => {
            let mode = funnel_mode(&ends, args.funnel, args.mode.unwrap_or(ModeSpec { j: 0, k: 0 }))?;
            mode_op(op, mode, args.r, opts)?
        }
    };
    let im_pts = im.points();
    let rows: Vec<Result<String>> = re
        .points()
        .into_par_iter()
        .map(|x| {
            let mut block = String::new();
            for &y in &im_pts {
                let s = Complex64::new(x, y);
                let v = match eval(s) {
                    Ok(v) => v,
                    Err(e) if excluded(&e) => Complex64::new(f64::NAN, f64::NAN),
                    Err(e) => return Err(e),
                };
                block.push_str(&csv_row(&[g17(x), g17(y), g17(v.re), g17(v.im)]));
            }
            Ok(block)
        })
        .collect();
    let mut out = csv_row(&["re_s".into(), "im_s".into(), "re_val".into(), "im_val".into()]);
    for row in rows {
        out.push_str(&row?);
    }
    Ok(Outcome::ok(out))
}

type ModeFn = Box<dyn Fn(Complex64) -> Result<Complex64> + Sync>;

fn mode_op(op: GridOp, mode: FunnelMode, r: Option<f64>, opts: EvalOptions) -> Result<ModeFn> {
    Ok(match op {
        GridOp::Smatrix => Box::new(move |s| smatrix_coeff(&mode, s, &opts)),
        GridOp::Reduced => Box::new(move |s| reduced_smatrix_coeff(&mode, s, &opts)),
        GridOp::Symbol => {
            if mode.kappa() == 0.0 {
                return Err(invalid("the leading symbol needs a mode with kappa != 0"));
            }
            Box::new(move |s| symbol_leading(&mode, s, &opts))
        }
        GridOp::Poisson => {
            let r = r.ok_or_else(|| invalid("poisson needs --r"))?;
            if !(r >= 0.0 && r.is_finite()) {
                return Err(invalid(format!("funnel radius must be nonnegative, got {r}")));
            }
            Box::new(move |s| poisson_coeff(&mode, s, r, &opts))
        }
        GridOp::Product => unreachable!("handled by the caller"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindingTarget {
    /// Winding of the reduced coefficient: minus the lattice multiplicity.
    Reduced,
    /// Scattering-pole multiplicity m(s0) - m(1 - s0).
    Scattering,
}

impl FromStr for WindingTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(WindingTarget::Reduced),
            "scattering" => Ok(WindingTarget::Scattering),
            _ => Err(invalid(format!("unknown target {s:?}; expected reduced or scattering"))),
        }
    }
}

pub fn winding(
    cfg: &Config,
    target: WindingTarget,
    funnel: usize,
    mode: ModeSpec,
    center: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<Outcome> {
    let ends = cfg.ends()?;
    let opts = cfg.eval_options()?;
    let mode = funnel_mode(&ends, funnel, mode)?;
    let contour = Contour::new(center, radius, nodes)?;
    let w = match target {
        WindingTarget::Reduced => scalar_winding(|s| reduced_smatrix_coeff(&mode, s, &opts), &contour)?,
        WindingTarget::Scattering => scattering_pole_multiplicity(&mode, &contour, &opts)?,
    };
    Ok(Outcome::ok(format!("{w}\n")))
}

pub fn verify(cfg: &Config, suite: &str) -> Result<Outcome> {
    let suite: Suite = suite.parse()?;
    let ends = cfg.ends()?;
    let opts = cfg.suite_options()?;
    let reports = run_suite(&ends, suite, &opts);
    let code = if reports.iter().all(|r| r.passed) { 0 } else { 1 };
    let mut text = serde_json::to_string_pretty(&reports).map_err(|e| invalid(e.to_string()))?;
    text.push('\n');
    Ok(Outcome { text, code })
}

pub fn count(cfg: &Config, funnel: usize, radius: f64) -> Result<Outcome> {
    let ends = cfg.ends()?;
    let f = ends.funnels.get(funnel).ok_or_else(|| invalid(format!("funnel {funnel} does not exist")))?;
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius must be nonnegative, got {radius}")));
    }
    Ok(Outcome::ok(format!("{}\n", counting_function(f, radius))))
}
