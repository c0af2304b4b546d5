// Generated by tests/oracle/mp_oracle.py (mpmath, 50 digits).

#![allow(clippy::excessive_precision)]

pub const LOG_GAMMA_1_PLUS_I: (f64, f64) = (-6.5092319930185633889e-1, -3.0164032046753319789e-1);
pub const POLYGAMMA_2: (f64, f64) = (3.9935544067049295557, -7.9444346888892103141e-1);
pub const HYP2F1: (f64, f64) = (1.2011691761864451211, 0.0);
pub const BESSEL_I: (f64, f64) = (-6.2499874569312742416e-1, -3.9605372982368170357);
pub const BESSEL_K: (f64, f64) = (1.3605392129954615892e-2, 1.0951813360656048464e-3);
pub const V0: (f64, f64) = (1.0564947883511210462, -6.6384463160031361862e-3);
pub const SMATRIX: (f64, f64) = (-1.32378355384581179, 1.0007253249812971948e-1);
pub const REDUCED: (f64, f64) = (-2.8306161906149523382, 6.6541930748580284222e-1);
pub const U_KAPPA: (f64, f64) = (1.0284797000612174498e-3, -2.5538976761895977434e-5);
pub const POISSON_K0_S1_R1: (f64, f64) = (5.511659713428300042e-1, 0.0);
