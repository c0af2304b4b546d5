use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::CheckReport;
use crate::ends::{FunnelTwist, SurfaceEnds};
use crate::error::{Error, Result};
use crate::funnel::{
    lattice_distance, ln_cosh, poisson_coeff, reflected_lattice_distance, smatrix_coeff, symbol_leading, FunnelMode,
};
use crate::specfun::{polygamma, EvalOptions, KahanSum};

/// Largest condition number accepted for the asymptotics fit.
pub const MAX_FIT_CONDITION: f64 = 1e8;
/// Modes |k| <= this enter the half-point check.
pub const HALF_POINT_MODES: i64 = 20;
/// Radius of the lattice enumeration in the half-point check.
pub const HALF_POINT_RADIUS: f64 = 100.0;

/// Third log-derivative of beta(s)/beta(1 - s) times P_k(s)/P_k(1 - s),
/// with P_k the genus-2 product over the mode lattice truncated at m <= M.
///
/// d^3 log(beta(s)/beta(1 - s)) = (psi''(a) + psi''(b) + psi''(c1) + psi''(c2)) / 8 with
/// a, b = (s + 1 +/- i y)/2 and c1, c2 = (2 - s +/- i y)/2. The product terms
/// contribute -2 mult/(mu - s)^3 and -2 mult/(mu - 1 + s)^3. The residual is
/// O(M^-2).
pub fn factorization_residual(mode: &FunnelMode, s: Complex64, m: usize, opts: &EvalOptions) -> Result<Complex64> {
    let y = mode.omega_kappa();
    for d in [lattice_distance(y, s), reflected_lattice_distance(y, s)] {
        if d < opts.pole_exclusion {
            return Err(Error::PoleProximity { at: s, distance: d });
        }
    }
    let inner = EvalOptions { pole_exclusion: 0.5 * opts.pole_exclusion, ..*opts };
    let iy = Complex64::new(0.0, y);
    let mut acc = KahanSum::new();
    for arg in [0.5 * (s + 1.0 + iy), 0.5 * (s + 1.0 - iy), 0.5 * (2.0 - s + iy), 0.5 * (2.0 - s - iy)] {
        acc.add(polygamma(2, arg, &inner)? / 8.0);
    }
    for (mu, mult) in mode.lattice(m) {
        let a = mu - s;
        let b = mu - 1.0 + s;
        acc.add(-2.0 * mult as f64 / (a * a * a));
        acc.add(-2.0 * mult as f64 / (b * b * b));
    }
    Ok(acc.value())
}

/// S(1/2) = -1 on every funnel mode with |k| <= 20, so the truncated
/// P = (S(1/2) + id)/2 vanishes, matching the absence of funnel resonances at
/// 1/2 (checked to radius 100). Cusps are not part of this model check.
pub fn half_point_check(ends: &SurfaceEnds, opts: &EvalOptions) -> CheckReport {
    let name = "verify.half_point";
    let mut worst: f64 = 0.0;
    let mut proj_norm: f64 = 0.0;
    let mut idempotency: f64 = 0.0;
    let mut half_hits = 0usize;
    let mut modes = 0usize;
    for f in &ends.funnels {
        for j in 0..f.dim() {
            for k in -HALF_POINT_MODES..=HALF_POINT_MODES {
                let mode = match f.mode(j, k) {
                    Ok(m) => m,
                    Err(e) => return CheckReport::failed(name, e.to_string()),
                };
                let v = match smatrix_coeff(&mode, Complex64::new(0.5, 0.0), opts) {
                    Ok(v) => v,
                    Err(e) => return CheckReport::failed(name, e.to_string()),
                };
                worst = worst.max((v + 1.0).norm());
                let p = 0.5 * (v + 1.0);
                proj_norm = proj_norm.max(p.norm());
                idempotency = idempotency.max((p * p - p).norm());
                modes += 1;
            }
        }
        let lattice = crate::ends::funnel_resonances(f, HALF_POINT_RADIUS);
        half_hits += lattice.multiplicity_at(Complex64::new(0.5, 0.0), 1e-12);
    }
    let measured = if half_hits > 0 { f64::INFINITY } else { worst.max(proj_norm).max(idempotency) };
    let mut details = format!(
        "{modes} modes, max |S(1/2) + 1| = {worst:e}, |P| = {proj_norm:e}, |P^2 - P| = {idempotency:e}, \
         rank P = 0, resonances at 1/2 within radius {HALF_POINT_RADIUS}: {half_hits}"
    );
    if !ends.cusps.is_empty() {
        details.push_str("; cusps ignored");
    }
    CheckReport::new(name, measured, details)
}

fn condition_2x2(m: &Matrix2<Complex64>) -> f64 {
    let sv = m.singular_values();
    let (max, min) = (sv.max(), sv.min());
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Fits (2s - 1) E(s; r_i) = rho_i^(1 - s) a0 + rho_i^s b0 at two radii and
/// compares (a0, b0) with (1, S(s)).
pub fn poisson_asymptotics_check(
    mode: &FunnelMode,
    s: Complex64,
    r1: f64,
    r2: f64,
    opts: &EvalOptions,
) -> Result<CheckReport> {
    if !(3.0 <= r1 && r1 < r2 && r2.is_finite()) {
        return Err(Error::InvalidInput(format!("need 3 <= r1 < r2, got {r1}, {r2}")));
    }
    let row = |r: f64| -> Result<(Complex64, Complex64, Complex64)> {
        let ln_rho = -ln_cosh(r);
        let rhs = (2.0 * s - 1.0) * poisson_coeff(mode, s, r, opts)?;
        Ok((((1.0 - s) * ln_rho).exp(), (s * ln_rho).exp(), rhs))
    };
    let (a1, b1, y1) = row(r1)?;
    let (a2, b2, y2) = row(r2)?;
    let m = Matrix2::new(a1, b1, a2, b2);
    let cond = condition_2x2(&m);
    if !(cond <= MAX_FIT_CONDITION) {
        return Err(Error::IllConditioned { cond });
    }
    let sol = m
        .lu()
        .solve(&Vector2::new(y1, y2))
        .ok_or(Error::IllConditioned { cond: f64::INFINITY })?;
    let (a0, b0) = (sol[0], sol[1]);
    let target = smatrix_coeff(mode, s, opts)?;
    let ea = (a0 - 1.0).norm();
    let eb = (b0 - target).norm();
    Ok(CheckReport::new(
        "verify.poisson_asymptotics",
        ea.max(eb),
        format!("a0 = {a0}, b0 = {b0}, S = {target}, |a0 - 1| = {ea:e}, |b0 - S| = {eb:e}, cond = {cond:.3e}"),
    ))
}

/// Least-squares slope of log|S/sigma - 1| against log k for k in [kmin, kmax].
pub fn symbol_slope(
    f: &FunnelTwist,
    j: usize,
    s: Complex64,
    kmin: i64,
    kmax: i64,
    opts: &EvalOptions,
) -> Result<(f64, f64)> {
    if kmin < 16 || kmax <= kmin {
        return Err(Error::InvalidInput(format!("need 16 <= kmin < kmax, got {kmin}, {kmax}")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut last = 0.0;
    for k in kmin..=kmax {
        let mode = f.mode(j, k)?;
        let rel = (smatrix_coeff(&mode, s, opts)? / symbol_leading(&mode, s, opts)? - 1.0).norm();
        xs.push((k as f64).ln());
        ys.push(rel.ln());
        last = rel;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok((sxy / sxx, last))
}

/// The relative error of the leading symbol decays like k^-2.
pub fn symbol_asymptotics_check(
    f: &FunnelTwist,
    j: usize,
    s: Complex64,
    kmin: i64,
    kmax: i64,
    opts: &EvalOptions,
) -> Result<CheckReport> {
    let (slope, last) = symbol_slope(f, j, s, kmin, kmax, opts)?;
    Ok(CheckReport::new(
        "verify.symbol_asymptotics",
        (slope + 2.0).abs(),
        format!("slope = {slope:.4} over k in [{kmin}, {kmax}], |S/sigma - 1| at k = {kmax}: {last:e}"),
    ))
}
