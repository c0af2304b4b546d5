//! Agreement with 50-digit reference values from `tests/oracle/mp_oracle.py`.

mod common;

use common::oracle::*;
use num_complex::Complex64;
use tscat_core::cusp::u_kappa;
use tscat_core::funnel::*;
use tscat_core::specfun::*;

const REL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(name: &str, got: Complex64, want: (f64, f64)) {
    let want = c(want.0, want.1);
    let rel = (got - want).norm() / want.norm();
    assert!(rel < REL, "{name}: {got} vs {want} (rel {rel:e})");
}

#[test]
fn log_gamma_oracle() {
    let o = EvalOptions::default();
    check("log_gamma(1+i)", log_gamma(c(1.0, 1.0), &o).unwrap(), LOG_GAMMA_1_PLUS_I);
}

#[test]
fn polygamma_oracle() {
    let o = EvalOptions::default();
    check("psi''(0.3+0.7i)", polygamma(2, c(0.3, 0.7), &o).unwrap(), POLYGAMMA_2);
}

#[test]
fn hypergeometric_oracle() {
    let o = EvalOptions::default();
    let v = regularized_2f1(c(0.5, 0.3), c(0.5, -0.3), c(1.5, 0.0), c(0.25, 0.0), &o).unwrap();
    check("2F1", v, HYP2F1);
}

#[test]
fn bessel_oracle() {
    let o = EvalOptions::default();
    check("I", bessel_i(c(0.5, 2.0), 1.3, &o).unwrap(), BESSEL_I);
    check("K", bessel_k(c(0.3, 1.1), 3.7, &o).unwrap(), BESSEL_K);
}

#[test]
fn funnel_oracle() {
    let o = EvalOptions::default();
    check("v0", v0(1.0, c(0.4, 0.2), 1.0, &o).unwrap(), V0);
    let m = FunnelMode::new(1.0, 0.3, 1);
    check("S", smatrix_coeff(&m, c(0.2, 0.9), &o).unwrap(), SMATRIX);
    // theta = 0.3, k = 2, omega = 1: y = 2.3, <k> = sqrt 5
    let m = FunnelMode::new(1.0, 0.3, 2);
    check("reduced", reduced_smatrix_coeff(&m, c(-0.4, 0.1), &o).unwrap(), REDUCED);
    let m = FunnelMode::new(1.0, 0.0, 0);
    check("poisson", poisson_coeff(&m, c(1.0, 0.0), 1.0, &o).unwrap(), POISSON_K0_S1_R1);
}

#[test]
fn cusp_oracle() {
    let o = EvalOptions::default();
    let v = u_kappa(2.0 * std::f64::consts::PI, c(0.7, 0.4), 0.5, 1.2, &o).unwrap();
    check("u_kappa", v, U_KAPPA);
}
