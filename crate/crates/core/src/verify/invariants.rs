use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::theorems::{
    factorization_residual, half_point_check, poisson_asymptotics_check, symbol_asymptotics_check,
};
use super::{CheckFn, CheckReport, SuiteOptions};
use crate::cusp::{cusp_mode_ode_residual, cusp_poisson, kernel_jump, u_kappa};
use crate::ends::{funnel_resonances, FunnelTwist, SurfaceEnds};
use crate::error::Result;
use crate::funnel::{
    lattice_distance, mode_ode_residual, poisson_coeff, reduced_smatrix_coeff, reflected_lattice_distance,
    smatrix_coeff, v0, FunnelMode,
};
use crate::gs::{log_residue, null_multiplicity, scalar_winding, winding_trace, Contour, FnFamily, MatrixFamily};
use crate::specfun::{
    bessel_i, bessel_k, gamma, log_gamma, polygamma, regularized_2f1, EvalOptions, KahanSum,
};
use crate::weierstrass::{counting_function, log_product, product_eval, ResonanceMultiset, TruncatedProduct};

/// Exclusion radius of the random grids around lattices and Gamma singularities.
pub const GRID_EXCLUSION: f64 = 0.05;
const FUNCTIONAL_SAMPLES: usize = 200;
const FUNNEL_MODES: i64 = 5;
const WINDING_MODES: i64 = 2;
const WINDING_RADIUS: f64 = 6.0;
const CONTROL_WINDOWS: usize = 20;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Turns a fallible measurement into a report.
fn report<F>(name: &'static str, f: F) -> CheckReport
where
    F: FnOnce() -> Result<(f64, String)>,
{
    match f() {
        Ok((measured, details)) => CheckReport::new(name, measured, details),
        Err(e) => CheckReport::failed(name, e.to_string()),
    }
}

fn rng_for(opts: &SuiteOptions, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    rng
}

fn funnel_modes(ends: &SurfaceEnds, kmax: i64) -> Vec<FunnelMode> {
    let mut out = Vec::new();
    for f in &ends.funnels {
        for j in 0..f.dim() {
            for k in -kmax..=kmax {
                out.push(FunnelMode::new(f.omega(), f.phases()[j].value(), k));
            }
        }
    }
    out
}

/// Distance from s to the half-integers, where Gamma(s + 1/2) or
/// Gamma(1/2 - s) is singular.
fn half_integer_distance(s: Complex64) -> f64 {
    let re = (s.re - 0.5).round() + 0.5;
    (s - re).norm()
}

/// Uniform sample from [-3, 4] x [-5, 5] i, rejected near both lattices and
/// the half-integers.
pub fn sample_s(rng: &mut ChaCha8Rng, y: f64) -> Complex64 {
    loop {
        let s = c(rng.random_range(-3.0..4.0), rng.random_range(-5.0..5.0));
        if lattice_distance(y, s) > GRID_EXCLUSION
            && reflected_lattice_distance(y, s) > GRID_EXCLUSION
            && half_integer_distance(s) > GRID_EXCLUSION
        {
            return s;
        }
    }
}

fn scattering(opts: &SuiteOptions, mode: &FunnelMode, s: Complex64) -> Result<Complex64> {
    Ok(opts.perturb(s, smatrix_coeff(mode, s, &opts.eval)?))
}

// ---------------------------------------------------------------- specfun

fn gamma_reflection(opts: &SuiteOptions) -> CheckReport {
    report("specfun.gamma_reflection", || {
        let mut rng = rng_for(opts, 1);
        let mut worst: f64 = 0.0;
        for z in integer_free_grid(&mut rng) {
            let v = gamma(z, &opts.eval)? * gamma(1.0 - z, &opts.eval)? * (PI * z).sin() / PI;
            worst = worst.max((v - 1.0).norm());
        }
        Ok((worst, "200 points, dist(z, Z) > 0.1".into()))
    })
}

fn gamma_recurrence(opts: &SuiteOptions) -> CheckReport {
    report("specfun.gamma_recurrence", || {
        let mut rng = rng_for(opts, 1);
        let mut worst: f64 = 0.0;
        for z in integer_free_grid(&mut rng) {
            let next = gamma(z + 1.0, &opts.eval)?;
            worst = worst.max((next - z * gamma(z, &opts.eval)?).norm() / next.norm());
        }
        Ok((worst, "200 points, dist(z, Z) > 0.1".into()))
    })
}

fn integer_free_grid(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(200);
    while out.len() < 200 {
        let z = c(rng.random_range(-6.0..6.0), rng.random_range(-3.0..3.0));
        if (z - z.re.round()).norm() > 0.1 {
            out.push(z);
        }
    }
    out
}

fn bessel_wronskian(opts: &SuiteOptions) -> CheckReport {
    report("specfun.bessel_wronskian", || {
        let h = 1e-5;
        let o = &opts.eval;
        let mut worst: f64 = 0.0;
        let orders = [c(0.3, 0.0), c(1.7, 0.0), c(-0.4, 0.0), c(0.2, 1.5), c(-1.1, 0.6)];
        for nu in orders {
            for x in [0.5, 1.5, 3.0, 6.0] {
                let i = bessel_i(nu, x, o)?;
                let k = bessel_k(nu, x, o)?;
                let di = (bessel_i(nu, x + h, o)? - bessel_i(nu, x - h, o)?) / (2.0 * h);
                let dk = (bessel_k(nu, x + h, o)? - bessel_k(nu, x - h, o)?) / (2.0 * h);
                worst = worst.max((i * dk - di * k + 1.0 / x).norm());
            }
        }
        Ok((worst, "central differences, h = 1e-5".into()))
    })
}

/// psi^(n)(z) against the (n+1)-th derivative of ln Gamma from a 64-point
/// Cauchy-formula difference on the circle |w - z| = 1/2.
fn polygamma_differences(opts: &SuiteOptions) -> CheckReport {
    report("specfun.polygamma_differences", || {
        let mut rng = rng_for(opts, 2);
        let (radius, nodes) = (0.5, 64usize);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let z = c(rng.random_range(1.0..6.0), rng.random_range(-4.0..4.0));
            let samples: Vec<Complex64> = (0..nodes)
                .map(|i| {
                    let w = Complex64::from_polar(radius, 2.0 * PI * i as f64 / nodes as f64);
                    log_gamma(z + w, &opts.eval).map(|v| (v, w))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .map(|(v, w)| v * w)
                .collect();
            for n in 0..=3u32 {
                let order = n as i32 + 1;
                let sum: KahanSum = samples
                    .iter()
                    .enumerate()
                    .map(|(i, &vw)| {
                        let w = Complex64::from_polar(radius, 2.0 * PI * i as f64 / nodes as f64);
                        vw / w.powi(order + 1)
                    })
                    .collect();
                let factorial: f64 = (1..=order).map(f64::from).product();
                let fd = sum.value() * factorial / nodes as f64;
                let exact = polygamma(n, z, &opts.eval)?;
                worst = worst.max((fd - exact).norm() / exact.norm().max(1.0));
            }
        }
        Ok((worst, "50 points, orders 0..=3".into()))
    })
}

fn hyp2f1_entire_in_c(opts: &SuiteOptions) -> CheckReport {
    report("specfun.hyp2f1_entire_in_c", || {
        let (a, b, z) = (c(0.3, 0.2), c(1.1, -0.4), c(0.3, 0.1));
        let mut worst: f64 = 0.0;
        for n in 0..=2i32 {
            let cc = c(-(n as f64), 0.0);
            let direct = regularized_2f1(a, b, cc, z, &opts.eval)?;
            // F(a, b; -n; z) = (a)_{n+1} (b)_{n+1} z^{n+1} F(a+n+1, b+n+1; n+2; z)
            let mut pre = Complex64::new(1.0, 0.0);
            for j in 0..=n {
                pre *= (a + j as f64) * (b + j as f64) * z;
            }
            let shifted = regularized_2f1(a + (n + 1) as f64, b + (n + 1) as f64, c((n + 2) as f64, 0.0), z, &opts.eval)?;
            let expect = pre * shifted;
            if !direct.is_finite() {
                return Ok((f64::INFINITY, format!("non-finite value at c = {cc}")));
            }
            worst = worst.max((direct - expect).norm() / expect.norm());
        }
        Ok((worst, "c = 0, -1, -2".into()))
    })
}

// ---------------------------------------------------------------- ends

fn ends_nesting(ends: &SurfaceEnds) -> CheckReport {
    let radii = [2.0, 5.0, 10.0, 20.0];
    let mut bad = 0;
    for f in &ends.funnels {
        for w in radii.windows(2) {
            if !funnel_resonances(f, w[0]).is_submultiset_of(&funnel_resonances(f, w[1])) {
                bad += 1;
            }
        }
    }
    CheckReport::new("ends.nesting", bad as f64, "radii 2, 5, 10, 20")
}

fn ends_conjugation(ends: &SurfaceEnds) -> CheckReport {
    let mut bad = 0;
    for f in &ends.funnels {
        let r = funnel_resonances(f, 20.0);
        for (p, m) in r.iter() {
            if r.multiplicity_at(p.conj(), 1e-12) != *m {
                bad += 1;
            }
        }
    }
    CheckReport::new("ends.conjugation", bad as f64, "radius 20")
}

/// Total multiplicity within radius r by a plain loop over (theta, p, m, k).
pub fn brute_force_count(f: &FunnelTwist, r: f64) -> usize {
    let omega = f.omega();
    let kmax = (r / omega).ceil() as i64 + 2;
    let mmax = r.ceil() as i64;
    let mut count = 0;
    for phase in f.phases() {
        let theta = phase.value();
        for p in [1.0, -1.0] {
            for m in 0..=mmax {
                for k in -kmax..=kmax {
                    let mu = c(-(1.0 + 2.0 * m as f64), p * omega * (theta + k as f64));
                    if mu.norm() <= r {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn ends_brute_force(ends: &SurfaceEnds) -> CheckReport {
    let mut bad = 0;
    let radii = [1.5, 10.0, 37.5, 100.0];
    for f in &ends.funnels {
        for r in radii {
            if counting_function(f, r) != brute_force_count(f, r) {
                bad += 1;
            }
        }
    }
    CheckReport::new("ends.brute_force_count", bad as f64, "radii 1.5, 10, 37.5, 100")
}

fn ends_no_half_point(ends: &SurfaceEnds) -> CheckReport {
    let mut bad = 0;
    for f in &ends.funnels {
        let r = funnel_resonances(f, 100.0);
        bad += r.iter().filter(|(p, _)| p.re > -1.0).count();
        bad += r.multiplicity_at(c(0.5, 0.0), 1e-12);
    }
    CheckReport::new("ends.no_half_point", bad as f64, "radius 100: no point at 1/2 or with Re > -1")
}

// ---------------------------------------------------------------- funnel

fn functional_equation(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.functional_equation", || {
        let mut rng = rng_for(opts, 3);
        let mut worst: f64 = 0.0;
        let modes = funnel_modes(ends, FUNNEL_MODES);
        for mode in &modes {
            for _ in 0..FUNCTIONAL_SAMPLES {
                let s = sample_s(&mut rng, mode.omega_kappa());
                let v = scattering(opts, mode, s)? * scattering(opts, mode, 1.0 - s)?;
                worst = worst.max((v - 1.0).norm());
            }
        }
        Ok((worst, format!("{} modes x {FUNCTIONAL_SAMPLES} points", modes.len())))
    })
}

fn unitarity(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.unitarity", || {
        let mut worst: f64 = 0.0;
        for mode in funnel_modes(ends, FUNNEL_MODES) {
            for n in -50..=50 {
                let s = c(0.5, 0.1 * n as f64);
                worst = worst.max((scattering(opts, &mode, s)?.norm() - 1.0).abs());
            }
        }
        Ok((worst, "Re s = 1/2, t = 0.1 n, |n| <= 50".into()))
    })
}

fn half_point(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.half_point", || {
        let mut worst: f64 = 0.0;
        for mode in funnel_modes(ends, FUNNEL_MODES) {
            worst = worst.max((scattering(opts, &mode, c(0.5, 0.0))? + 1.0).norm());
        }
        Ok((worst, "max |S(1/2) + 1|".into()))
    })
}

fn reduced_consistency(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.reduced_consistency", || {
        let mut rng = rng_for(opts, 4);
        let o = &opts.eval;
        let mut worst: f64 = 0.0;
        for mode in funnel_modes(ends, FUNNEL_MODES) {
            for _ in 0..20 {
                let s = sample_s(&mut rng, mode.omega_kappa());
                let ratio = (log_gamma(s + 0.5, o)? - log_gamma(0.5 - s, o)?).exp();
                let power = ((1.0 - 2.0 * s) * mode.bracket().ln()).exp();
                let expect = ratio * power * scattering(opts, &mode, s)?;
                let got = reduced_smatrix_coeff(&mode, s, o)?;
                worst = worst.max((got - expect).norm() / got.norm());
            }
        }
        Ok((worst, "relative difference, 20 points per mode".into()))
    })
}

/// Largest |omega kappa| at which v0 enters the finite-difference checks.
pub const V0_MAX_FREQUENCY: f64 = 5.0;

/// Modes |k| <= 2 with |omega kappa| <= [`V0_MAX_FREQUENCY`].
fn v0_modes(ends: &SurfaceEnds) -> Vec<FunnelMode> {
    funnel_modes(ends, 2).into_iter().filter(|m| m.omega_kappa().abs() <= V0_MAX_FREQUENCY).collect()
}

fn v0_reflection(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.v0_reflection", || {
        let mut worst: f64 = 0.0;
        for mode in v0_modes(ends) {
            let y = mode.omega_kappa();
            for s in [c(0.3, 0.5), c(-0.7, 1.2), c(1.4, -0.3), c(0.1, 0.0)] {
                for r in [0.1, 0.8, 2.0, 5.0] {
                    let a = v0(y, s, r, &opts.eval)?;
                    let b = v0(y, 1.0 - s, r, &opts.eval)?;
                    worst = worst.max((a - b).norm() / a.norm().max(1.0));
                }
            }
        }
        Ok((worst, "v0(s) = v0(1 - s), |k| <= 2".into()))
    })
}

/// Mode-ODE residual of v0 with one Richardson step on the stencil width,
/// relative to max(1, |v0|).
fn v0_ode(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.v0_ode", || {
        let h = 2e-3;
        let mut worst: f64 = 0.0;
        for mode in v0_modes(ends) {
            let y = mode.omega_kappa();
            for s in [c(0.3, 0.5), c(0.8, -0.2)] {
                for r in [0.5, 1.5, 3.0] {
                    let err = std::cell::RefCell::new(None);
                    let f = |x| {
                        v0(y, s, x, &opts.eval).unwrap_or_else(|e| {
                            *err.borrow_mut() = Some(e);
                            Complex64::new(f64::NAN, 0.0)
                        })
                    };
                    let coarse = mode_ode_residual(&mode, s, f, r, h);
                    let fine = mode_ode_residual(&mode, s, f, r, 0.5 * h);
                    if let Some(e) = err.into_inner() {
                        return Err(e);
                    }
                    let res = (4.0 * fine - coarse) / 3.0;
                    let scale = v0(y, s, r, &opts.eval)?.norm().max(1.0);
                    worst = worst.max(res.norm() / scale);
                }
            }
        }
        Ok((worst, format!("relative residual, h = 2e-3 and 1e-3 extrapolated, |omega kappa| <= {V0_MAX_FREQUENCY}")))
    })
}

fn intertwining(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.intertwining", || {
        let mut worst: f64 = 0.0;
        for mode in v0_modes(ends) {
            for s in [c(0.3, 0.5), c(-0.2, 1.1), c(0.9, -0.7)] {
                for r in [0.5, 2.0] {
                    let lhs = poisson_coeff(&mode, 1.0 - s, r, &opts.eval)? * scattering(opts, &mode, s)?;
                    let rhs = poisson_coeff(&mode, s, r, &opts.eval)?;
                    worst = worst.max((lhs + rhs).norm());
                }
            }
        }
        Ok((worst, "E(1 - s) S(s) + E(s)".into()))
    })
}

fn symbol_decay(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("funnel.symbol_decay", || {
        let mut worst: f64 = 1.0;
        for f in &ends.funnels {
            for j in 0..f.dim() {
                for s in [c(0.25, 0.5), c(-0.3, 0.2)] {
                    let mut lo = f64::INFINITY;
                    let mut hi: f64 = 0.0;
                    let mut k = 16;
                    while k <= 512 {
                        let v = scattering(opts, &f.mode(j, k)?, s)?.norm() * (k as f64).powf(1.0 - 2.0 * s.re);
                        lo = lo.min(v);
                        hi = hi.max(v);
                        k *= 2;
                    }
                    worst = worst.max(hi / lo);
                }
            }
        }
        Ok((worst, "max/min of |S| k^(1 - 2 Re s), k = 16..512".into()))
    })
}

// ---------------------------------------------------------------- cusp

fn cusp_kappas(ends: &SurfaceEnds) -> Vec<f64> {
    let mut out = vec![0.0, 2.0 * PI, 4.0 * PI * 0.3];
    for cusp in &ends.cusps {
        for p in cusp.phases() {
            for k in 0..=1 {
                let kappa = 2.0 * PI * (k as f64 + p.value());
                if !out.contains(&kappa) {
                    out.push(kappa);
                }
            }
        }
    }
    out
}

fn cusp_symmetry(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("cusp.kernel_symmetry", || {
        let s = c(0.7, 0.4);
        let mut worst: f64 = 0.0;
        for kappa in cusp_kappas(ends) {
            for (y, yp) in [(0.4, 1.7), (1.0, 2.5), (0.8, 0.9)] {
                let a = u_kappa(kappa, s, y, yp, &opts.eval)?;
                let b = u_kappa(kappa, s, yp, y, &opts.eval)?;
                worst = worst.max((a - b).norm());
            }
        }
        Ok((worst, "u(y, y') = u(y', y)".into()))
    })
}

fn cusp_ode(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("cusp.mode_ode", || {
        let s = c(0.7, 0.4);
        let mut worst: f64 = 0.0;
        for kappa in cusp_kappas(ends) {
            for (y, yp) in [(0.5, 1.5), (0.8, 2.5), (2.0, 1.0), (3.0, 1.2)] {
                let err = std::cell::RefCell::new(None);
                let res = cusp_mode_ode_residual(
                    kappa,
                    s,
                    |x| {
                        u_kappa(kappa, s, x, yp, &opts.eval).unwrap_or_else(|e| {
                            *err.borrow_mut() = Some(e);
                            Complex64::new(f64::NAN, 0.0)
                        })
                    },
                    y,
                    1e-4,
                );
                if let Some(e) = err.into_inner() {
                    return Err(e);
                }
                worst = worst.max(res.norm());
            }
        }
        Ok((worst, "off-diagonal points, h = 1e-4".into()))
    })
}

fn cusp_jump(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("cusp.jump", || {
        let s = c(0.7, 0.0);
        let mut worst: f64 = 0.0;
        for kappa in cusp_kappas(ends) {
            for ystar in [0.5, 1.0, 2.0] {
                let j = kernel_jump(kappa, s, ystar, 1e-4, &opts.eval)?;
                worst = worst.max((j + 1.0).norm());
            }
        }
        Ok((worst, "y* = 0.5, 1, 2".into()))
    })
}

fn cusp_k_reflection(opts: &SuiteOptions) -> CheckReport {
    report("cusp.k_order_reflection", || {
        let mut worst: f64 = 0.0;
        for nu in [c(0.2, 0.4), c(1.3, -0.8), c(0.0, 2.0), c(2.0, 0.0), c(-0.6, 0.1)] {
            for x in [0.3, 1.2, 2.5, 7.0] {
                let a = bessel_k(nu, x, &opts.eval)?;
                let b = bessel_k(-nu, x, &opts.eval)?;
                worst = worst.max((a - b).norm());
            }
        }
        Ok((worst, "K_nu = K_-nu".into()))
    })
}

fn cusp_poisson_limit(opts: &SuiteOptions) -> CheckReport {
    report("cusp.poisson_limit", || {
        let mut worst: f64 = 0.0;
        let yp = 1e6;
        for s in [c(0.8, 0.3), c(2.0, 0.0), c(-0.4, 1.0)] {
            for y in [0.5, 1.5, 3.0] {
                let lhs = ((1.0 - s) * (1.0f64 / yp).ln()).exp() * u_kappa(0.0, s, y, yp, &opts.eval)?;
                let rhs = cusp_poisson(s, y, &opts.eval)?;
                worst = worst.max((lhs - rhs).norm() / rhs.norm());
            }
        }
        Ok((worst, "y' = 1e6".into()))
    })
}

// ---------------------------------------------------------------- weierstrass

fn product_conjugation(ends: &SurfaceEnds) -> CheckReport {
    report("weierstrass.conjugation", || {
        let mut worst: f64 = 0.0;
        for f in &ends.funnels {
            let p = TruncatedProduct::funnel(f, 20.0)?;
            for s in [c(0.3, 0.7), c(-2.2, 1.1), c(1.5, -2.0)] {
                let a = product_eval(&p, s);
                let b = product_eval(&p, s.conj());
                worst = worst.max((b - a.conj()).norm() / a.norm());
            }
        }
        Ok((worst, "radius 20".into()))
    })
}

fn truncation_stability(ends: &SurfaceEnds) -> CheckReport {
    report("weierstrass.truncation_stability", || {
        let s = c(0.4, 0.3);
        let mut bad = 0;
        let mut details = Vec::new();
        for f in &ends.funnels {
            let logs: Vec<Complex64> = [25.0, 50.0, 100.0, 200.0]
                .iter()
                .map(|&r| TruncatedProduct::funnel(f, r).map(|p| log_product(&p, s)))
                .collect::<Result<_>>()?;
            let deltas: Vec<f64> = logs.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
            bad += deltas.windows(2).filter(|d| d[1] >= d[0]).count();
            details.push(format!("{deltas:?}"));
        }
        Ok((bad as f64, format!("|log P_2R - log P_R| for R = 25, 50, 100: {}", details.join("; "))))
    })
}

fn counting_growth(ends: &SurfaceEnds) -> CheckReport {
    let mut worst: f64 = 0.0;
    for f in &ends.funnels {
        for i in 1..=10 {
            let r = 10.0 * i as f64;
            let n = counting_function(f, r) as f64;
            worst = worst.max(n * f.omega() / (f.dim() as f64 * r * r));
        }
    }
    CheckReport::new("weierstrass.counting_growth", worst, "N(r) omega / (dim V r^2), r = 10..100")
}

/// Third log-derivative of the mode product truncated at m <= M.
fn mode_sum(mode: &FunnelMode, s: Complex64, m: usize) -> Complex64 {
    let ms = ResonanceMultiset::from_points(mode.lattice(m));
    let radius = ms.iter().map(|(p, _)| p.norm()).fold(1.0, f64::max);
    let p = TruncatedProduct::new(ms, radius).expect("radius covers the lattice");
    crate::weierstrass::log_deriv3(&p, s, &EvalOptions::default()).unwrap_or(Complex64::new(f64::NAN, 0.0))
}

fn mode_tail(ends: &SurfaceEnds) -> CheckReport {
    let s = c(0.2, 0.7);
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for f in &ends.funnels {
        for j in 0..f.dim() {
            let mode = FunnelMode::new(f.omega(), f.phases()[j].value(), 0);
            let t: Vec<Complex64> = [100, 200, 400].iter().map(|&m| mode_sum(&mode, s, m)).collect();
            let ratio = (t[1] - t[0]).norm() / (t[2] - t[1]).norm();
            ratios.push(ratio);
            worst = worst.max((ratio - 4.0).abs());
        }
    }
    if worst.is_nan() {
        worst = f64::INFINITY;
    }
    CheckReport::new("weierstrass.mode_tail", worst, format!("tail ratios under doubling of M = 100: {ratios:.3?}"))
}

// ---------------------------------------------------------------- gs

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale)
}

/// E(lambda) diag((lambda - lambda0)^e) F(lambda) with E, F = I + small
/// linear polynomials, invertible on the unit disk around lambda0.
pub struct ConstructedFamily {
    pub lambda0: Complex64,
    pub exponents: Vec<i32>,
    e: [DMatrix<Complex64>; 2],
    f: [DMatrix<Complex64>; 2],
}

impl ConstructedFamily {
    pub fn random(rng: &mut ChaCha8Rng, lambda0: Complex64, exponents: Vec<i32>) -> Self {
        let n = exponents.len();
        let scale = 0.05;
        let e = [random_matrix(rng, n, scale), random_matrix(rng, n, scale)];
        let f = [random_matrix(rng, n, scale), random_matrix(rng, n, scale)];
        Self { lambda0, exponents, e, f }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.exponents.iter().map(|&e| e as i64).sum()
    }
}

impl MatrixFamily for ConstructedFamily {
    fn dimension(&self) -> usize {
        self.exponents.len()
    }

    fn eval(&self, lambda: Complex64) -> DMatrix<Complex64> {
        let n = self.dimension();
        let z = lambda - self.lambda0;
        let id = DMatrix::<Complex64>::identity(n, n);
        let e = &id + &self.e[0] + &self.e[1] * z;
        let f = &id + &self.f[0] + &self.f[1] * z;
        let d = DMatrix::from_fn(n, n, |i, j| if i == j { z.powi(self.exponents[i]) } else { c(0.0, 0.0) });
        e * d * f
    }
}

fn random_exponents(rng: &mut ChaCha8Rng, n: usize) -> Vec<i32> {
    (0..n).map(|_| rng.random_range(-3..=3)).collect()
}

fn families(opts: &SuiteOptions, count: usize) -> Vec<ConstructedFamily> {
    let mut rng = rng_for(opts, 5);
    (0..count)
        .map(|_| {
            let l0 = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let ex = random_exponents(&mut rng, 3);
            ConstructedFamily::random(&mut rng, l0, ex)
        })
        .collect()
}

fn gs_constructed(opts: &SuiteOptions) -> CheckReport {
    report("gs.constructed_families", || {
        let mut worst: f64 = 0.0;
        for fam in families(opts, 10) {
            let ct = Contour::circle(fam.lambda0, 0.5)?;
            let v = log_residue(&fam, &ct)?;
            worst = worst.max((v - fam.exponent_sum() as f64).norm());
        }
        Ok((worst, "10 seeded 3x3 families, |log residue - sum of exponents|".into()))
    })
}

fn gs_node_doubling(opts: &SuiteOptions) -> CheckReport {
    report("gs.node_doubling", || {
        let mut bad = 0;
        for fam in families(opts, 10) {
            let ct = Contour::new(fam.lambda0, 0.5, 256)?;
            if winding_trace(&fam, &ct)? != winding_trace(&fam, &ct.with_nodes(512)?)? {
                bad += 1;
            }
        }
        Ok((bad as f64, "256 vs 512 nodes".into()))
    })
}

fn gs_multiplicativity(opts: &SuiteOptions) -> CheckReport {
    report("gs.multiplicativity", || {
        let fams = families(opts, 10);
        let mut bad = 0;
        for pair in fams.chunks(2) {
            // share the centre so that both factors have their singularity inside
            let (b1, b2) = (&pair[0], &pair[1]);
            let shifted = FnFamily::new(3, |l: Complex64| b2.eval(l - b1.lambda0 + b2.lambda0));
            let prod = FnFamily::new(3, |l: Complex64| b1.eval(l) * shifted.eval(l));
            let ct = Contour::circle(b1.lambda0, 0.5)?;
            let lhs = winding_trace(&prod, &ct)?;
            let rhs = winding_trace(b1, &ct)? + winding_trace(&shifted, &ct)?;
            if lhs != rhs || lhs != b1.exponent_sum() + b2.exponent_sum() {
                bad += 1;
            }
        }
        Ok((bad as f64, "M(B1 B2) = M(B1) + M(B2) on 5 pairs".into()))
    })
}

fn gs_log_residue_identity(opts: &SuiteOptions) -> CheckReport {
    report("gs.log_residue_identity", || {
        let mut bad = 0;
        for fam in families(opts, 10) {
            let ex: Vec<i64> = fam.exponents.iter().map(|&e| e as i64).collect();
            let neg: Vec<i64> = ex.iter().map(|e| -e).collect();
            let ct = Contour::circle(fam.lambda0, 0.5)?;
            let n_diff = null_multiplicity(&ex) as i64 - null_multiplicity(&neg) as i64;
            if n_diff != winding_trace(&fam, &ct)? {
                bad += 1;
            }
        }
        Ok((bad as f64, "N(B) - N(B^-1) = M(B)".into()))
    })
}

/// Winding of the reduced coefficient around every mode resonance with
/// |mu| < 6 and around control centres off the lattice. Modes |k| <= 2 and
/// every further mode reaching the disk are included, so that the per-point
/// sums can be compared with the full multiset.
pub fn lattice_winding_mismatches(f: &FunnelTwist, opts: &EvalOptions, seed: u64) -> Result<(usize, usize)> {
    let mut bad = 0;
    let mut checked = 0;
    let full = funnel_resonances(f, WINDING_RADIUS);
    let mut per_point: Vec<(Complex64, i64)> = Vec::new();
    let reach = (WINDING_RADIUS / f.omega()).ceil() as i64 + 1;
    let kmax = reach.max(WINDING_MODES);
    for j in 0..f.dim() {
        for k in -kmax..=kmax {
            let mode = f.mode(j, k)?;
            let y = mode.omega_kappa();
            let radius = if y == 0.0 { 0.2 } else { 0.2f64.min(0.4 * y.abs()) };
            for (mu, mult) in mode.lattice_within(WINDING_RADIUS) {
                if mu.norm() >= WINDING_RADIUS {
                    continue;
                }
                let ct = Contour::circle(mu, radius)?;
                let w = scalar_winding(|s| reduced_smatrix_coeff(&mode, s, opts), &ct)?;
                checked += 1;
                if w != -(mult as i64) {
                    bad += 1;
                }
                match per_point.iter_mut().find(|(p, _)| (p - mu).norm() < 1e-12) {
                    Some(e) => e.1 -= w,
                    None => per_point.push((mu, -w)),
                }
            }
        }
    }
    for (mu, total) in &per_point {
        if full.multiplicity_at(*mu, 1e-12) as i64 != *total {
            bad += 1;
        }
    }
    let inside = full.iter().filter(|(p, _)| p.norm() < WINDING_RADIUS).count();
    if inside != per_point.len() {
        bad += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut controls = 0;
    while controls < CONTROL_WINDOWS {
        let j = rng.random_range(0..f.dim());
        let k = rng.random_range(-WINDING_MODES..=WINDING_MODES);
        let mode = f.mode(j, k)?;
        let y = mode.omega_kappa();
        let s0 = c(rng.random_range(-5.5..1.5), rng.random_range(-5.0..5.0));
        let clear = lattice_distance(y, s0).min(reflected_lattice_distance(y, s0)).min((s0 - 0.5).norm());
        if clear < 0.2 {
            continue;
        }
        let ct = Contour::circle(s0, 0.1)?;
        if scalar_winding(|s| reduced_smatrix_coeff(&mode, s, opts), &ct)? != 0 {
            bad += 1;
        }
        controls += 1;
        checked += 1;
    }
    Ok((bad, checked))
}

fn gs_lattice_winding(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    report("gs.lattice_winding", || {
        let mut bad = 0;
        let mut checked = 0;
        for (i, f) in ends.funnels.iter().enumerate() {
            let (b, n) = lattice_winding_mismatches(f, &opts.eval, opts.seed.wrapping_add(i as u64))?;
            bad += b;
            checked += n;
        }
        Ok((bad as f64, format!("{checked} windows")))
    })
}

// ---------------------------------------------------------------- theorems

fn factorization(ends: &SurfaceEnds, opts: &SuiteOptions) -> (CheckReport, CheckReport) {
    let s = c(0.2, 0.7);
    let mut final_worst: f64 = 0.0;
    let mut ratio_worst: f64 = 0.0;
    let mut notes = Vec::new();
    for f in &ends.funnels {
        for j in 0..f.dim() {
            let mode = FunnelMode::new(f.omega(), f.phases()[j].value(), 0);
            let d: Result<Vec<f64>> = [50, 100, 200, 400]
                .iter()
                .map(|&m| factorization_residual(&mode, s, m, &opts.eval).map(|v| v.norm()))
                .collect();
            match d {
                Ok(d) => {
                    final_worst = final_worst.max(d[3]);
                    for w in d.windows(2) {
                        ratio_worst = ratio_worst.max((w[0] / w[1] - 4.0).abs());
                    }
                    notes.push(format!("{d:?}"));
                }
                Err(e) => {
                    let why = e.to_string();
                    return (
                        CheckReport::failed("verify.factorization_residual", why.clone()),
                        CheckReport::failed("verify.factorization_ratio", why),
                    );
                }
            }
        }
    }
    let details = format!("|D_M| for M = 50, 100, 200, 400: {}", notes.join("; "));
    (
        CheckReport::new("verify.factorization_residual", final_worst, details.clone()),
        CheckReport::new("verify.factorization_ratio", ratio_worst, details),
    )
}

/// The O(rho^2) remainder at r = 4 grows like y^2, so the fit runs on the
/// k = 0 mode of least frequency.
fn poisson_asymptotics(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    let s = c(0.3, 0.0);
    let mode = ends
        .funnels
        .iter()
        .flat_map(|f| f.phases().iter().map(|p| FunnelMode::new(f.omega(), p.value(), 0)))
        .min_by(|a, b| a.omega_kappa().abs().total_cmp(&b.omega_kappa().abs()));
    match mode {
        Some(mode) => match poisson_asymptotics_check(&mode, s, 4.0, 5.0, &opts.eval) {
            Ok(mut r) => {
                r.details = format!("omega kappa = {}, {}", mode.omega_kappa(), r.details);
                r
            }
            Err(e) => CheckReport::failed("verify.poisson_asymptotics", e.to_string()),
        },
        None => CheckReport::failed("verify.poisson_asymptotics", "no funnel modes"),
    }
}

fn symbol_asymptotics(ends: &SurfaceEnds, opts: &SuiteOptions) -> CheckReport {
    let s = c(0.25, 0.5);
    let mut worst: Option<CheckReport> = None;
    for f in &ends.funnels {
        for j in 0..f.dim() {
            let r = match symbol_asymptotics_check(f, j, s, 64, 512, &opts.eval) {
                Ok(r) => r,
                Err(e) => return CheckReport::failed("verify.symbol_asymptotics", e.to_string()),
            };
            if worst.as_ref().is_none_or(|w| r.measured > w.measured) {
                worst = Some(r);
            }
        }
    }
    worst.unwrap_or_else(|| CheckReport::failed("verify.symbol_asymptotics", "no funnel modes"))
}

// ---------------------------------------------------------------- registry

pub(super) fn registry<'a>(ends: &'a SurfaceEnds, opts: &'a SuiteOptions) -> Vec<(&'static str, CheckFn<'a>)> {
    let mut v: Vec<(&'static str, CheckFn<'a>)> = Vec::new();
    if !ends.funnels.is_empty() {
        v.push(("specfun.gamma_reflection", Box::new(move || gamma_reflection(opts))));
        v.push(("specfun.gamma_recurrence", Box::new(move || gamma_recurrence(opts))));
        v.push(("specfun.bessel_wronskian", Box::new(move || bessel_wronskian(opts))));
        v.push(("specfun.polygamma_differences", Box::new(move || polygamma_differences(opts))));
        v.push(("specfun.hyp2f1_entire_in_c", Box::new(move || hyp2f1_entire_in_c(opts))));
        v.push(("ends.nesting", Box::new(move || ends_nesting(ends))));
        v.push(("ends.conjugation", Box::new(move || ends_conjugation(ends))));
        v.push(("ends.brute_force_count", Box::new(move || ends_brute_force(ends))));
        v.push(("ends.no_half_point", Box::new(move || ends_no_half_point(ends))));
        v.push(("funnel.functional_equation", Box::new(move || functional_equation(ends, opts))));
        v.push(("funnel.unitarity", Box::new(move || unitarity(ends, opts))));
        v.push(("funnel.half_point", Box::new(move || half_point(ends, opts))));
        v.push(("funnel.reduced_consistency", Box::new(move || reduced_consistency(ends, opts))));
        v.push(("funnel.v0_reflection", Box::new(move || v0_reflection(ends, opts))));
        v.push(("funnel.v0_ode", Box::new(move || v0_ode(ends, opts))));
        v.push(("funnel.intertwining", Box::new(move || intertwining(ends, opts))));
        v.push(("funnel.symbol_decay", Box::new(move || symbol_decay(ends, opts))));
    }
    if !ends.cusps.is_empty() {
        v.push(("cusp.kernel_symmetry", Box::new(move || cusp_symmetry(ends, opts))));
        v.push(("cusp.mode_ode", Box::new(move || cusp_ode(ends, opts))));
        v.push(("cusp.jump", Box::new(move || cusp_jump(ends, opts))));
        v.push(("cusp.k_order_reflection", Box::new(move || cusp_k_reflection(opts))));
        v.push(("cusp.poisson_limit", Box::new(move || cusp_poisson_limit(opts))));
    }
    if !ends.funnels.is_empty() {
        v.push(("weierstrass.conjugation", Box::new(move || product_conjugation(ends))));
        v.push(("weierstrass.truncation_stability", Box::new(move || truncation_stability(ends))));
        v.push(("weierstrass.counting_growth", Box::new(move || counting_growth(ends))));
        v.push(("weierstrass.mode_tail", Box::new(move || mode_tail(ends))));
        v.push(("gs.constructed_families", Box::new(move || gs_constructed(opts))));
        v.push(("gs.node_doubling", Box::new(move || gs_node_doubling(opts))));
        v.push(("gs.multiplicativity", Box::new(move || gs_multiplicativity(opts))));
        v.push(("gs.log_residue_identity", Box::new(move || gs_log_residue_identity(opts))));
        v.push(("gs.lattice_winding", Box::new(move || gs_lattice_winding(ends, opts))));
        v.push(("verify.factorization_residual", Box::new(move || factorization(ends, opts).0)));
        v.push(("verify.factorization_ratio", Box::new(move || factorization(ends, opts).1)));
        v.push(("verify.half_point", Box::new(move || half_point_check(ends, &opts.eval))));
        v.push(("verify.poisson_asymptotics", Box::new(move || poisson_asymptotics(ends, opts))));
        v.push(("verify.symbol_asymptotics", Box::new(move || symbol_asymptotics(ends, opts))));
    }
    v
}
