//! Fourier-mode analysis of the model funnel: the functions beta and v0,
//! Poisson and scattering coefficients, the leading symbol, the modal ODE
//! and the bound functions d_k.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ends::FunnelTwist;
use crate::error::{Error, Result};
use crate::specfun::{
    dist_to_nonpositive_integers, japanese_bracket, log_gamma, regularized_2f1_with_complement, rgamma,
    EvalOptions,
};

/// Switch to reciprocal-Gamma evaluation this close to a Gamma pole.
const RGAMMA_SWITCH: f64 = 1e-2;

/// One Fourier mode of a funnel: omega = 2 pi / l, phase theta and index k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunnelMode {
    pub omega: f64,
    pub theta: f64,
    pub k: i64,
}

impl FunnelMode {
    pub fn new(omega: f64, theta: f64, k: i64) -> Self {
        Self { omega, theta, k }
    }

    /// kappa = k + theta.
    pub fn kappa(&self) -> f64 {
        self.k as f64 + self.theta
    }

    pub fn omega_kappa(&self) -> f64 {
        self.omega * self.kappa()
    }

    /// Japanese bracket of the integer index k.
    pub fn bracket(&self) -> f64 {
        japanese_bracket(Complex64::new(self.k as f64, 0.0))
    }

    /// Resonances of this mode with m <= m_max: -(1 + 2m) +/- i omega kappa.
    /// The two signs coincide when kappa = 0 and then carry multiplicity 2.
    pub fn lattice(&self, m_max: usize) -> Vec<(Complex64, usize)> {
        let y = self.omega_kappa();
        let mut out = Vec::with_capacity(2 * (m_max + 1));
        for m in 0..=m_max {
            let re = -(1.0 + 2.0 * m as f64);
            if y == 0.0 {
                out.push((Complex64::new(re, 0.0), 2));
            } else {
                out.push((Complex64::new(re, y), 1));
                out.push((Complex64::new(re, -y), 1));
            }
        }
        out
    }

    /// Resonances of this mode inside the closed disk |s| <= radius.
    pub fn lattice_within(&self, radius: f64) -> Vec<(Complex64, usize)> {
        let m_max = ((radius - 1.0) / 2.0).floor().max(0.0) as usize;
        self.lattice(m_max)
            .into_iter()
            .filter(|(p, _)| p.norm() <= radius)
            .collect()
    }
}

/// A coefficient value tagged with its mode and spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunnelModeValue {
    pub mode: FunnelMode,
    pub s: Complex64,
    pub value: Complex64,
}

/// Nearest element of {-1, -3, -5, ...} to x.
fn nearest_negative_odd(x: f64) -> f64 {
    if x >= -1.0 {
        -1.0
    } else {
        let n = ((-x - 1.0) / 2.0).round();
        -(1.0 + 2.0 * n)
    }
}

/// Distance from s to the mode lattice -(1 + 2 N_0) +/- i y.
pub fn lattice_distance(y: f64, s: Complex64) -> f64 {
    let dre = s.re - nearest_negative_odd(s.re);
    let dim = (s.im - y).abs().min((s.im + y).abs());
    dre.hypot(dim)
}

/// Distance from s to the reflected lattice 1 - (mode lattice), where
/// beta(1 - s) has its poles.
pub fn reflected_lattice_distance(y: f64, s: Complex64) -> f64 {
    lattice_distance(y, 1.0 - s)
}

/// Distance from s to {3/2, 5/2, ...}, the poles of Gamma(3/2 - s).
fn half_integer_pole_distance(s: Complex64) -> f64 {
    dist_to_nonpositive_integers(1.5 - s)
}

fn refuse_within(s: Complex64, distance: f64, opts: &EvalOptions) -> Result<()> {
    if distance < opts.pole_exclusion {
        Err(Error::PoleProximity { at: s, distance })
    } else {
        Ok(())
    }
}

fn beta_arguments(y: f64, s: Complex64) -> (Complex64, Complex64) {
    let iy = Complex64::new(0.0, y);
    (0.5 * (s + iy + 1.0), 0.5 * (s - iy + 1.0))
}

/// ln beta_kappa(s), the sum of the principal log-Gammas.
pub fn ln_beta(omega_kappa: f64, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    refuse_within(s, lattice_distance(omega_kappa, s), opts)?;
    // the Gamma arguments are (s +/- i y + 1)/2, so distances halve
    let inner = EvalOptions { pole_exclusion: 0.5 * opts.pole_exclusion, ..*opts };
    let (a, b) = beta_arguments(omega_kappa, s);
    Ok(-LN_2 + log_gamma(a, &inner)? + log_gamma(b, &inner)?)
}

/// beta_kappa(s) = Gamma((s + i omega kappa + 1)/2) Gamma((s - i omega kappa + 1)/2) / 2.
pub fn beta(omega_kappa: f64, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    Ok(ln_beta(omega_kappa, s, opts)?.exp())
}

/// 1/beta_kappa(s); entire.
pub fn rbeta(omega_kappa: f64, s: Complex64) -> Complex64 {
    let (a, b) = beta_arguments(omega_kappa, s);
    2.0 * rgamma(a) * rgamma(b)
}

/// beta(s)/beta(1 - s). Near the zeros (poles of beta(1 - s)) the
/// denominator is replaced by its reciprocal-Gamma form.
fn beta_ratio(y: f64, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let num = ln_beta(y, s, opts)?;
    if reflected_lattice_distance(y, s) < RGAMMA_SWITCH {
        Ok(num.exp() * rbeta(y, 1.0 - s))
    } else {
        Ok((num - ln_beta(y, 1.0 - s, opts)?).exp())
    }
}

/// ln cosh r without overflow; minus the log of the boundary defining function.
pub fn ln_cosh(r: f64) -> f64 {
    let a = r.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// v0_kappa(s; r) = tanh r cosh(r)^(-s) F((s + i omega kappa + 1)/2, (s - i omega kappa + 1)/2; 3/2; tanh^2 r),
/// with F the regularized hypergeometric function.
pub fn v0(omega_kappa: f64, s: Complex64, r: f64, opts: &EvalOptions) -> Result<Complex64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("radius must be non-negative, got {r}")));
    }
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t = r.tanh();
    let e = (-2.0 * r).exp();
    // sech^2 r = 4 e^{-2r} / (1 + e^{-2r})^2
    let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    let (a, b) = beta_arguments(omega_kappa, s);
    let f = regularized_2f1_with_complement(
        a,
        b,
        Complex64::new(1.5, 0.0),
        Complex64::new(t * t, 0.0),
        Complex64::new(sech2, 0.0),
        opts,
    )?;
    Ok(t * (-s * ln_cosh(r)).exp() * f)
}

/// Poisson coefficient beta(s) v0(s; r) / Gamma(s + 1/2).
pub fn poisson_coeff(mode: &FunnelMode, s: Complex64, r: f64, opts: &EvalOptions) -> Result<Complex64> {
    let y = mode.omega_kappa();
    let b = beta(y, s, opts)?;
    Ok(b * v0(y, s, r, opts)? * rgamma(s + 0.5))
}

/// ln(-Gamma(1/2 - s)/Gamma(s - 1/2)) = ln Gamma(3/2 - s) - ln Gamma(s + 1/2),
/// or `None` when s + 1/2 is close to a Gamma pole (a zero of the ratio).
fn ln_gamma_quotient(s: Complex64, opts: &EvalOptions) -> Result<Option<Complex64>> {
    refuse_within(s, half_integer_pole_distance(s), opts)?;
    let top = log_gamma(1.5 - s, opts)?;
    if dist_to_nonpositive_integers(s + 0.5) < RGAMMA_SWITCH {
        Ok(None)
    } else {
        Ok(Some(top - log_gamma(s + 0.5, opts)?))
    }
}

/// Gamma(3/2 - s)/Gamma(s + 1/2), which equals -Gamma(1/2 - s)/Gamma(s - 1/2).
pub fn gamma_quotient(s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    match ln_gamma_quotient(s, opts)? {
        Some(l) => Ok(l.exp()),
        None => Ok(log_gamma(1.5 - s, opts)?.exp() * rgamma(s + 0.5)),
    }
}

/// Scattering coefficient Gamma(1/2 - s) beta(s) / (Gamma(s - 1/2) beta(1 - s)),
/// evaluated as -exp(ln Gamma(3/2 - s) - ln Gamma(s + 1/2) + ln beta(s) - ln beta(1 - s)).
///
/// s = 1/2 is an ordinary point with value exactly -1.
pub fn smatrix_coeff(mode: &FunnelMode, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let y = mode.omega_kappa();
    refuse_within(s, lattice_distance(y, s), opts)?;
    refuse_within(s, reflected_lattice_distance(y, s), opts)?;
    let lb = ln_beta(y, s, opts)? - ln_beta(y, 1.0 - s, opts)?;
    match ln_gamma_quotient(s, opts)? {
        Some(lg) => Ok(-(lg + lb).exp()),
        None => Ok(-(log_gamma(1.5 - s, opts)? + lb).exp() * rgamma(s + 0.5)),
    }
}

/// Reduced coefficient <k>^(1 - 2s) (s - 1/2) beta(s) / beta(1 - s).
///
/// Its only poles are the mode's resonances.
pub fn reduced_smatrix_coeff(mode: &FunnelMode, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let power = ((1.0 - 2.0 * s) * mode.bracket().ln()).exp();
    Ok(power * (s - 0.5) * beta_ratio(mode.omega_kappa(), s, opts)?)
}

/// -<k>^(1 - 2s) beta(s) / beta(1 - s): the reduced coefficient without the
/// factor (s - 1/2), so that s = 1/2 is neither a zero nor a pole. Used for
/// scattering-pole multiplicities.
pub fn normalized_smatrix_coeff(mode: &FunnelMode, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let power = ((1.0 - 2.0 * s) * mode.bracket().ln()).exp();
    Ok(-power * beta_ratio(mode.omega_kappa(), s, opts)?)
}

/// Leading large-kappa term 2^(1 - 2s) (Gamma(1/2 - s)/Gamma(s - 1/2)) |omega kappa|^(2s - 1)
/// of the scattering coefficient.
pub fn symbol_leading(mode: &FunnelMode, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let y = mode.omega_kappa().abs();
    if mode.kappa() == 0.0 || y == 0.0 {
        return Err(Error::ZeroKappa);
    }
    let scale = (1.0 - 2.0 * s) * LN_2 + (2.0 * s - 1.0) * y.ln();
    match ln_gamma_quotient(s, opts)? {
        Some(lg) => Ok(-(lg + scale).exp()),
        None => Ok(-(log_gamma(1.5 - s, opts)? + scale).exp() * rgamma(s + 0.5)),
    }
}

/// Central-difference residual of the modal equation
/// -f'' - tanh(r) f' + (omega kappa)^2 sech^2(r) f - s(1 - s) f at r.
pub fn mode_ode_residual<F>(mode: &FunnelMode, s: Complex64, f: F, r: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let (fm, f0, fp) = (f(r - h), f(r), f(r + h));
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    let d1 = (fp - fm) / (2.0 * h);
    let y = mode.omega_kappa();
    let sech = r.cosh().recip();
    -d2 - r.tanh() * d1 + y * y * sech * sech * f0 - s * (1.0 - s) * f0
}

/// Distance from x to {1, -1, -3, ...}.
fn dist_real_odd(x: f64) -> f64 {
    if x >= 1.0 {
        x - 1.0
    } else {
        let n = ((1.0 - x) / 2.0).round();
        (x - (1.0 - 2.0 * n)).abs()
    }
}

/// Distance from u to the nearest non-zero integer.
fn dist_nonzero_integer(u: f64) -> f64 {
    let mut n = u.round();
    if n == 0.0 {
        n = if u >= 0.0 { 1.0 } else { -1.0 };
    }
    (u - n).abs()
}

fn dist_integer(u: f64) -> f64 {
    (u - u.round()).abs()
}

fn singular_factor(s: Complex64, distance: f64, power: i32) -> Result<f64> {
    if distance == 0.0 {
        Err(Error::OnSingularSet { s })
    } else {
        Ok(distance.powi(-power))
    }
}

/// The bound function d_k(s) of a funnel twist, k >= 1.
///
/// The sets involved are 1 - 2N_0 (real), 1 - 2N_0 + i omega (Z \ {0}),
/// 1 - 2N_0 + i omega (1/2 + Z), and 1 - 2N_0 + i omega (+/-theta + Z) for the
/// other phases.
pub fn dk_bound(k: usize, s: Complex64, f: &FunnelTwist) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("d_k is defined for k >= 1".into()));
    }
    let omega = f.omega();
    let dre = dist_real_odd(s.re);
    let u = s.im / omega;
    let mut out = 1.0;
    for (phase, m) in f.distinct_phases() {
        let (cutoff, dim) = if phase.is_zero() {
            (2 * m, omega * dist_nonzero_integer(u))
        } else if phase.is_half() {
            (2 * m, omega * dist_integer(u - 0.5))
        } else {
            let th = phase.value();
            (m, omega * dist_integer(u - th).min(dist_integer(u + th)))
        };
        if phase.is_zero() && k <= m {
            out *= singular_factor(s, dre.hypot(s.im), 2)?;
        }
        if k <= cutoff {
            out *= singular_factor(s, dre.hypot(dim), 1)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::Phase;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn o() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn beta_special_values() {
        assert!((beta(0.0, c(1.0, 0.0), &o()).unwrap() - 0.5).norm() < 1e-15);
        assert!((beta(0.0, c(0.0, 0.0), &o()).unwrap() - PI / 2.0).norm() < 1e-14);
        let expect = 0.5 * PI / PI.sinh();
        assert!((beta(2.0, c(1.0, 0.0), &o()).unwrap() - expect).norm() < 1e-14);
        assert!(matches!(beta(2.0, c(-1.0, 2.0), &o()), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn smatrix_special_values() {
        let m = FunnelMode::new(1.0, 0.0, 0);
        assert_eq!(smatrix_coeff(&m, c(0.5, 0.0), &o()).unwrap(), c(-1.0, 0.0));
        let v = smatrix_coeff(&m, c(0.0, 0.0), &o()).unwrap();
        assert!((v + PI / 2.0).norm() < 1e-13, "{v}");
        assert!(smatrix_coeff(&m, c(1.5, 0.0), &o()).is_err());
        assert!(smatrix_coeff(&m, c(2.0, 0.0), &o()).is_err());
    }

    #[test]
    fn smatrix_at_gamma_zero() {
        // s = -1/2 is a zero of 1/Gamma(s + 1/2)
        let m = FunnelMode::new(1.0, 0.3, 1);
        let v = smatrix_coeff(&m, c(-0.5, 0.0), &o()).unwrap();
        assert_eq!(v, c(0.0, 0.0));
        let near = smatrix_coeff(&m, c(-0.5 + 1e-3, 0.0), &o()).unwrap();
        let far = smatrix_coeff(&m, c(-0.5 + 2e-2, 0.0), &o()).unwrap();
        assert!(near.norm() < far.norm());
    }

    #[test]
    fn reduced_special_values() {
        let m = FunnelMode::new(1.0, 0.0, 0);
        let v = reduced_smatrix_coeff(&m, c(0.0, 0.0), &o()).unwrap();
        assert!((v + PI / 2.0).norm() < 1e-13);
        assert_eq!(reduced_smatrix_coeff(&m, c(0.5, 0.0), &o()).unwrap(), c(0.0, 0.0));
        // zero of beta(s)/beta(1 - s) at s = 2
        assert!(reduced_smatrix_coeff(&m, c(2.0, 0.0), &o()).unwrap().norm() < 1e-15);
        assert!(reduced_smatrix_coeff(&m, c(-1.0, 0.0), &o()).is_err());
        assert_eq!(normalized_smatrix_coeff(&m, c(0.5, 0.0), &o()).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn v0_vanishes_at_geodesic_and_is_symmetric() {
        assert_eq!(v0(1.0, c(0.3, 0.2), 0.0, &o()).unwrap(), c(0.0, 0.0));
        let s = c(0.3, 0.5);
        for &r in &[0.1, 0.8, 3.0, 9.0] {
            let a = v0(1.0, s, r, &o()).unwrap();
            let b = v0(1.0, 1.0 - s, r, &o()).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm(), "r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn v0_solves_the_modal_equation() {
        let m = FunnelMode::new(1.0, 0.0, 1);
        let s = c(0.4, 0.2);
        for &r in &[0.3, 1.0, 2.5] {
            let res = mode_ode_residual(&m, s, |x| v0(1.0, s, x, &o()).unwrap(), r, 1e-3);
            assert!(res.norm() < 1e-5, "r={r}: {res}");
        }
    }

    #[test]
    fn constants_are_harmonic_at_zero_frequency() {
        let m = FunnelMode::new(1.0, 0.0, 0);
        let res = mode_ode_residual(&m, c(0.0, 0.0), |_| c(1.0, 0.0), 0.7, 1e-3);
        assert_eq!(res, c(0.0, 0.0));
    }

    #[test]
    fn symbol_needs_nonzero_frequency() {
        let m = FunnelMode::new(1.0, 0.0, 0);
        assert_eq!(symbol_leading(&m, c(0.2, 0.0), &o()), Err(Error::ZeroKappa));
        let m = FunnelMode::new(1.0, 0.0, 100);
        let s = c(0.2, 0.7);
        let a = symbol_leading(&m, s, &o()).unwrap();
        let b = symbol_leading(&m, s.conj(), &o()).unwrap();
        assert!((a.conj() - b).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn dk_examples() {
        let f = FunnelTwist::new(2.0 * PI, vec![Phase::float(0.3).unwrap()]).unwrap();
        assert!((dk_bound(1, c(-1.0, 0.0), &f).unwrap() - 1.0 / 0.3).abs() < 1e-12);
        assert_eq!(dk_bound(2, c(-1.0, 0.0), &f).unwrap(), 1.0);
        let g = FunnelTwist::trivial(2.0 * PI).unwrap();
        assert!((dk_bound(1, c(0.0, 0.0), &g).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(matches!(dk_bound(1, c(1.0, 0.0), &g), Err(Error::OnSingularSet { .. })));
        assert!(dk_bound(0, c(0.0, 0.0), &g).is_err());
    }

    #[test]
    fn mode_lattice_multiplicities() {
        let m = FunnelMode::new(1.0, 0.0, 0);
        assert_eq!(m.lattice_within(3.5), vec![(c(-1.0, 0.0), 2), (c(-3.0, 0.0), 2)]);
        let m = FunnelMode::new(1.0, 0.3, -1);
        assert_eq!(m.lattice_within(1.5).len(), 2);
    }
}
