//! Fourier-mode resolvent kernels and the Poisson operator of the parabolic
//! cylinder.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{bessel_i, bessel_k, EvalOptions};

/// A kernel value with the point it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspKernelValue {
    pub kappa: f64,
    pub s: Complex64,
    pub y: f64,
    pub yprime: f64,
    pub value: Complex64,
}

fn check_heights(y: f64, yprime: f64) -> Result<()> {
    if !(y > 0.0 && yprime > 0.0 && y.is_finite() && yprime.is_finite()) {
        return Err(Error::InvalidInput(format!("heights must be positive, got {y} and {yprime}")));
    }
    Ok(())
}

fn check_half(s: Complex64, opts: &EvalOptions) -> Result<()> {
    if (s - 0.5).norm() < opts.pole_exclusion {
        return Err(Error::HalfPole { s });
    }
    Ok(())
}

/// Modal kernel u_kappa(s; y, y').
///
/// sqrt(y y') I_{s-1/2}(|kappa| y_<) K_{s-1/2}(|kappa| y_>) for kappa != 0 and
/// y_<^s y_>^(1-s) / (2s - 1) for kappa = 0.
pub fn u_kappa(kappa: f64, s: Complex64, y: f64, yprime: f64, opts: &EvalOptions) -> Result<Complex64> {
    check_heights(y, yprime)?;
    let (lo, hi) = if y <= yprime { (y, yprime) } else { (yprime, y) };
    if kappa == 0.0 {
        check_half(s, opts)?;
        let v = (s * lo.ln() + (1.0 - s) * hi.ln()).exp();
        return Ok(v / (2.0 * s - 1.0));
    }
    let nu = s - 0.5;
    let k = kappa.abs();
    let i = bessel_i(nu, k * lo, opts)?;
    let kk = bessel_k(nu, k * hi, opts)?;
    Ok((y * yprime).sqrt() * i * kk)
}

/// Scalar part y^s / (2s - 1) of the cusp Poisson kernel. The projection
/// onto the invariant vectors is [`crate::ends::CuspTwist::e1_projection`].
pub fn cusp_poisson(s: Complex64, y: f64, opts: &EvalOptions) -> Result<Complex64> {
    check_heights(y, 1.0)?;
    check_half(s, opts)?;
    Ok((s * y.ln()).exp() / (2.0 * s - 1.0))
}

/// Jump of d/dy u_kappa(s; y, y*) across y = y*, from one-sided second-order
/// differences on each side.
pub fn kernel_jump(kappa: f64, s: Complex64, ystar: f64, h: f64, opts: &EvalOptions) -> Result<Complex64> {
    if !(h > 0.0 && 2.0 * h < ystar) {
        return Err(Error::InvalidInput(format!("step {h} must be positive and below y*/2")));
    }
    let u = |y: f64| u_kappa(kappa, s, y, ystar, opts);
    let u0 = u(ystar)?;
    let right = (-3.0 * u0 + 4.0 * u(ystar + h)? - u(ystar + 2.0 * h)?) / (2.0 * h);
    let left = (3.0 * u0 - 4.0 * u(ystar - h)? + u(ystar - 2.0 * h)?) / (2.0 * h);
    Ok(right - left)
}

/// Central-difference residual of -y^2 (f'' - kappa^2 f) - s(1 - s) f at y.
pub fn cusp_mode_ode_residual<F>(kappa: f64, s: Complex64, f: F, y: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let (fm, f0, fp) = (f(y - h), f(y), f(y + h));
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    -y * y * (d2 - kappa * kappa * f0) - s * (1.0 - s) * f0
}
