use std::f64::consts::PI;

use num_complex::Complex64;

use super::{rgamma, sin_pi, EvalOptions, KahanSum};
use crate::error::{Error, Result};

/// Below this |z| the defining series is summed directly.
const DIRECT_RADIUS: f64 = 0.75;
/// Distance of c - a - b from an integer below which the connection formula
/// is replaced by interpolation in c.
const INTEGER_GAP: f64 = 1e-4;
/// Interpolation nodes (offsets of c - a - b from the integer).
const INTERP_STEP: f64 = 1e-3;

/// Sum of the defining power series of the regularized function
/// F(a,b;c;z) = sum_n (a)_n (b)_n / Gamma(c+n) z^n / n!.
///
/// Well defined for every c, including the non-positive integers, where the
/// leading terms vanish.
pub fn regularized_2f1_series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    let zabs = z.norm();
    let tail_factor = (1.0 - zabs).max(1e-3);
    let mut acc = KahanSum::new();
    let mut term = rgamma(c);
    acc.add(term);
    if z == Complex64::new(0.0, 0.0) {
        return Ok(term);
    }
    let mut small_run = 0;
    for n in 0..opts.max_terms {
        let nf = n as f64;
        let denom = c + nf;
        let next = if denom == Complex64::new(0.0, 0.0) {
            // c = -n exactly: restart from the first surviving term.
            pochhammer_term(a, b, z, n + 1)
        } else {
            term * (a + nf) * (b + nf) * z / ((nf + 1.0) * denom)
        };
        acc.add(next);
        let sum = acc.value().norm();
        let ratio = if term.norm() > 0.0 { next.norm() / term.norm() } else { 0.0 };
        term = next;
        if (a + nf + 1.0) == Complex64::new(0.0, 0.0) || (b + nf + 1.0) == Complex64::new(0.0, 0.0) {
            // terminating series
            return Ok(acc.value());
        }
        if sum > 0.0 && ratio < 1.0 && term.norm() <= opts.rel_tol * sum * tail_factor {
            small_run += 1;
            if small_run >= 2 {
                return Ok(acc.value());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "regularized 2F1 series",
        terms: opts.max_terms,
    })
}

/// (a)_n (b)_n z^n / n!, the n-th term when 1/Gamma(c + n) = 1.
fn pochhammer_term(a: Complex64, b: Complex64, z: Complex64, n: usize) -> Complex64 {
    let mut t = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let jf = j as f64;
        t *= (a + jf) * (b + jf) * z / (jf + 1.0);
    }
    t
}

fn connection_formula(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    w: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    let d = c - a - b;
    let first = regularized_2f1_series(a, b, a + b - c + 1.0, w, opts)? * rgamma(c - a) * rgamma(c - b);
    let second = (d * w.ln()).exp()
        * regularized_2f1_series(c - a, c - b, d + 1.0, w, opts)?
        * rgamma(a)
        * rgamma(b);
    Ok(PI / sin_pi(d) * (first - second))
}

/// Regularized Gauss hypergeometric function F(a,b;c;z)/Gamma(c) for |z| < 1.
///
/// Near z = 1 the z -> 1 - z connection formula is used. When c - a - b is
/// within 1e-4 of an integer, the connection formula is evaluated at four
/// nearby values of c and interpolated with a cubic, since F is entire in c.
pub fn regularized_2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    regularized_2f1_with_complement(a, b, c, z, 1.0 - z, opts)
}

/// As [`regularized_2f1`], with `w = 1 - z` supplied by the caller so that it
/// carries full relative precision when z is close to 1.
pub fn regularized_2f1_with_complement(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    w: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    // a real z that rounds to 1 is still inside the disk if w says so
    let inside_by_complement = z.im == 0.0 && w.im == 0.0 && w.re > 0.0 && w.re < DIRECT_RADIUS;
    if !(z.norm() < 1.0 || inside_by_complement) {
        return Err(Error::InvalidInput(format!("regularized 2F1 needs |z| < 1, got {z}")));
    }
    if z.norm() <= DIRECT_RADIUS || w.norm() >= DIRECT_RADIUS {
        return regularized_2f1_series(a, b, c, z, opts);
    }
    let d = c - a - b;
    let m = d.re.round();
    let offset = d - m;
    if offset.norm() >= INTEGER_GAP {
        return connection_formula(a, b, c, w, opts);
    }
    let nodes = [-2.0 * INTERP_STEP, -INTERP_STEP, INTERP_STEP, 2.0 * INTERP_STEP];
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &ti) in nodes.iter().enumerate() {
        let ci = c - offset + ti;
        let value = connection_formula(a, b, ci, w, opts)?;
        let mut weight = Complex64::new(1.0, 0.0);
        for (j, &tj) in nodes.iter().enumerate() {
            if i != j {
                weight *= (offset - tj) / (ti - tj);
            }
        }
        acc += weight * value;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_argument_gives_reciprocal_gamma() {
        let o = EvalOptions::default();
        let v = regularized_2f1(c(0.3, 1.0), c(2.0, -1.0), c(2.5, 0.5), c(0.0, 0.0), &o).unwrap();
        let expect = gamma(c(2.5, 0.5), &o).unwrap().inv();
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn log_closed_form() {
        let o = EvalOptions::default();
        let v = regularized_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0), &o).unwrap();
        assert!((v.re - 2.0 * std::f64::consts::LN_2).abs() < 2e-12);
        // -ln(1 - z)/z close to z = 1 goes through the connection formula,
        // where c - a - b = 0 is an integer.
        let z = 0.97;
        let v = regularized_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(z, 0.0), &o).unwrap();
        let expect = -(1.0 - z).ln() / z;
        assert!((v.re - expect).abs() < 1e-9 * expect, "{v} vs {expect}");
    }

    #[test]
    fn connection_formula_matches_series_in_overlap() {
        let o = EvalOptions::default();
        let (a, b, cc) = (c(0.65, 0.5), c(0.65, -0.5), c(1.5, 0.0));
        for &z in &[0.76, 0.8, 0.85] {
            let direct = regularized_2f1_series(a, b, cc, c(z, 0.0), &o).unwrap();
            let conn = connection_formula(a, b, cc, c(1.0 - z, 0.0), &o).unwrap();
            assert!((direct - conn).norm() < 1e-11 * direct.norm(), "z={z}");
        }
    }

    #[test]
    fn terminating_series_is_a_polynomial() {
        // F(-2, b; c; z) * Gamma(c) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let o = EvalOptions::default();
        let (b, cc, z) = (c(1.5, 0.0), c(3.0, 0.0), c(0.4, 0.1));
        let v = regularized_2f1(c(-2.0, 0.0), b, cc, z, &o).unwrap() * 2.0;
        let poly = 1.0 - 2.0 * b * z / cc + b * (b + 1.0) * z * z / (cc * (cc + 1.0));
        assert!((v - poly).norm() < 1e-14);
    }

    #[test]
    fn rejects_outside_unit_disk() {
        let o = EvalOptions::default();
        assert!(regularized_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), &o).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        let o = EvalOptions { max_terms: 10, ..Default::default() };
        let r = regularized_2f1_series(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(-0.9, 0.0), &o);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
