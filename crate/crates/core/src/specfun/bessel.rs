use std::f64::consts::PI;

use num_complex::Complex64;

use super::{rgamma, sin_pi, EvalOptions, KahanSum};
use crate::error::{Error, Result};

/// Offset used for the two-point limit of K at integer orders.
const INTEGER_ORDER_EPS: f64 = 1e-5;
/// Above this argument K is computed from its integral representation, where
/// the difference I_{-nu} - I_nu would cancel catastrophically.
const REFLECTION_MAX_X: f64 = 2.0;

fn check_argument(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput(format!("Bessel argument must be positive, got {x}")));
    }
    Ok(())
}

/// Modified Bessel function of the first kind I_nu(x), complex order, x > 0.
///
/// Ascending series sum_k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)).
pub fn bessel_i(nu: Complex64, x: f64, opts: &EvalOptions) -> Result<Complex64> {
    check_argument(x)?;
    if nu.im == 0.0 && nu.re < 0.0 && nu.re == nu.re.round() {
        // I_{-n} = I_n
        return bessel_i(-nu, x, opts);
    }
    let half = 0.5 * x;
    let q = half * half;
    let mut term = (nu * half.ln()).exp() * rgamma(nu + 1.0);
    let mut acc = KahanSum::new();
    acc.add(term);
    for k in 0..opts.max_terms {
        let kf = k as f64 + 1.0;
        let step = q / (kf * (kf + nu));
        term *= step;
        acc.add(term);
        if step.norm() < 1.0 && term.norm() <= opts.rel_tol * acc.value().norm() {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel I series",
        terms: opts.max_terms,
    })
}

/// K_nu(x) = (pi/2) (I_{-nu}(x) - I_nu(x)) / sin(nu pi).
///
/// Within `INTEGER_ORDER_EPS / 2` of an integer order the value is the
/// average of the formula at nu +/- `INTEGER_ORDER_EPS`.
pub fn bessel_k_reflection(nu: Complex64, x: f64, opts: &EvalOptions) -> Result<Complex64> {
    check_argument(x)?;
    let nearest = Complex64::new(nu.re.round(), 0.0);
    let near_integer = (nu - nearest).norm() < 0.5 * INTEGER_ORDER_EPS;
    if opts.integer_order_limit {
        if near_integer {
            let plus = reflection_formula(nu + INTEGER_ORDER_EPS, x, opts)?;
            let minus = reflection_formula(nu - INTEGER_ORDER_EPS, x, opts)?;
            return Ok(0.5 * (plus + minus));
        }
    } else if sin_pi(nu).norm() < opts.pole_exclusion {
        return Err(Error::NearIntegerOrder { nu });
    }
    reflection_formula(nu, x, opts)
}

fn reflection_formula(nu: Complex64, x: f64, opts: &EvalOptions) -> Result<Complex64> {
    // the difference cancels, so the series are summed to full precision
    let inner = EvalOptions { rel_tol: opts.rel_tol.min(1e-17), ..*opts };
    let diff = bessel_i(-nu, x, &inner)? - bessel_i(nu, x, &inner)?;
    Ok(0.5 * PI * diff / sin_pi(nu))
}

/// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt by the trapezoidal rule.
///
/// The integrand is entire and decays doubly exponentially, so the
/// trapezoidal rule converges geometrically in the step size.
pub fn bessel_k_integral(nu: Complex64, x: f64, opts: &EvalOptions) -> Result<Complex64> {
    check_argument(x)?;
    let h = 0.05 / (x.sqrt() / 4.0).max(1.0);
    let integrand = |t: f64| {
        let damp = -x * t.cosh();
        0.5 * ((nu * t + damp).exp() + (-nu * t + damp).exp())
    };
    let growth = nu.re.abs();
    // past this point x sinh t exceeds |Re nu| and the integrand is decreasing
    let t_peak = (growth / x).asinh();
    let mut acc = KahanSum::new();
    acc.add(0.5 * integrand(0.0));
    for n in 1..opts.max_terms {
        let t = n as f64 * h;
        let f = integrand(t);
        acc.add(f);
        if t > t_peak {
            // envelope bound for the remaining tail
            let bound = (-x * t.cosh() + growth * t).exp();
            if bound <= 1e-3 * opts.rel_tol * acc.value().norm() || bound == 0.0 {
                return Ok(h * acc.value());
            }
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel K integral",
        terms: opts.max_terms,
    })
}

/// Modified Bessel function of the second kind K_nu(x), complex order, x > 0.
///
/// Uses the reflection formula for x <= 2 and the integral representation
/// beyond.
pub fn bessel_k(nu: Complex64, x: f64, opts: &EvalOptions) -> Result<Complex64> {
    check_argument(x)?;
    if x <= REFLECTION_MAX_X {
        bessel_k_reflection(nu, x, opts)
    } else {
        bessel_k_integral(nu, x, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn i0_at_small_argument() {
        let v = bessel_i(c(0.0, 0.0), 1e-10, &EvalOptions::default()).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn half_integer_closed_forms() {
        let o = EvalOptions::default();
        for &x in &[0.3, 1.0, 2.0, 3.5, 12.0, 40.0] {
            let k = bessel_k(c(0.5, 0.0), x, &o).unwrap();
            let expect = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((k - expect).norm() < 1e-12 * expect, "x={x}: {k} vs {expect}");
            let i = bessel_i(c(0.5, 0.0), x, &o).unwrap();
            let expect_i = (2.0 / (PI * x)).sqrt() * x.sinh();
            assert!((i - expect_i).norm() < 1e-12 * expect_i, "x={x}");
        }
    }

    #[test]
    fn reflection_and_integral_agree() {
        let o = EvalOptions::default();
        for &nu in &[c(0.3, 0.0), c(0.2, 1.5), c(-1.7, 0.4), c(2.0, 0.0), c(0.0, 0.0)] {
            for &x in &[0.5, 1.0, 1.8, 2.0] {
                let a = bessel_k_reflection(nu, x, &o).unwrap();
                let b = bessel_k_integral(nu, x, &o).unwrap();
                assert!((a - b).norm() < 1e-9 * b.norm(), "nu={nu} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn integer_order_without_limit_is_rejected() {
        let o = EvalOptions { integer_order_limit: false, ..Default::default() };
        assert!(matches!(
            bessel_k_reflection(c(1.0, 0.0), 1.0, &o),
            Err(Error::NearIntegerOrder { .. })
        ));
    }

    #[test]
    fn nonpositive_argument_is_invalid() {
        let o = EvalOptions::default();
        assert!(bessel_i(c(0.0, 0.0), 0.0, &o).is_err());
        assert!(bessel_k(c(0.0, 0.0), -1.0, &o).is_err());
    }
}
