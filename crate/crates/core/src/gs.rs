//! Argument-principle calculus for meromorphic matrix families: logarithmic
//! residues, winding traces and scalar winding numbers.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funnel::{normalized_smatrix_coeff, FunnelMode};
use crate::specfun::{EvalOptions, KahanSum};

/// Maximum deviation from an integer accepted for a contour integral.
pub const INTEGER_TOL: f64 = 0.01;
/// Condition number beyond which a node is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;
/// Minimum clearance between a contour and a known singular point.
pub const CONTOUR_CLEARANCE: f64 = 1e-3;

/// A circle traversed once counter-clockwise, sampled at equally spaced nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    center: Complex64,
    radius: f64,
    nodes: usize,
}

impl Contour {
    pub const DEFAULT_NODES: usize = 256;

    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("contour radius must be positive, got {radius}")));
        }
        if nodes < 16 || !nodes.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("node count must be even and >= 16, got {nodes}")));
        }
        Ok(Self { center, radius, nodes })
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(center, radius, Self::DEFAULT_NODES)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn with_nodes(&self, nodes: usize) -> Result<Self> {
        Self::new(self.center, self.radius, nodes)
    }

    /// Node i, at parameter t = i / nodes.
    pub fn node(&self, i: usize) -> Complex64 {
        let t = i as f64 / self.nodes as f64;
        self.center + self.radius * Complex64::from_polar(1.0, 2.0 * PI * t)
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.nodes).map(|i| self.node(i)).collect()
    }

    /// True if `p` lies strictly inside the circle.
    pub fn encloses(&self, p: Complex64) -> bool {
        (p - self.center).norm() < self.radius
    }

    /// Refuses contours that pass within `CONTOUR_CLEARANCE` of any point.
    pub fn guard<'a, I>(&self, points: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a Complex64>,
    {
        for p in points {
            let d = ((p - self.center).norm() - self.radius).abs();
            if d < CONTOUR_CLEARANCE {
                return Err(Error::ContourTooClose { point: *p, distance: d });
            }
        }
        Ok(())
    }
}

/// A square matrix function of one complex variable.
pub trait MatrixFamily: Sync {
    fn dimension(&self) -> usize;
    fn eval(&self, lambda: Complex64) -> DMatrix<Complex64>;
}

/// Adapter turning a closure into a [`MatrixFamily`].
pub struct FnFamily<F> {
    dimension: usize,
    f: F,
}

impl<F> FnFamily<F>
where
    F: Fn(Complex64) -> DMatrix<Complex64> + Sync,
{
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F> MatrixFamily for FnFamily<F>
where
    F: Fn(Complex64) -> DMatrix<Complex64> + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn eval(&self, lambda: Complex64) -> DMatrix<Complex64> {
        (self.f)(lambda)
    }
}

/// diag((lambda - lambda0)^e_j).
pub fn diagonal_family(lambda0: Complex64, exponents: Vec<i32>) -> impl MatrixFamily {
    let n = exponents.len();
    FnFamily::new(n, move |l: Complex64| {
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                (l - lambda0).powi(exponents[i])
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    })
}

/// Pointwise product B1(lambda) B2(lambda).
pub fn product_family<'a>(b1: &'a dyn MatrixFamily, b2: &'a dyn MatrixFamily) -> impl MatrixFamily + 'a {
    FnFamily::new(b1.dimension(), move |l| b1.eval(l) * b2.eval(l))
}

/// Pointwise inverse B(lambda)^-1.
pub fn inverse_family<'a>(b: &'a dyn MatrixFamily) -> impl MatrixFamily + 'a {
    FnFamily::new(b.dimension(), move |l| {
        b.eval(l)
            .try_inverse()
            .unwrap_or_else(|| DMatrix::from_element(b.dimension(), b.dimension(), Complex64::new(f64::NAN, 0.0)))
    })
}

/// Weights of the spectral derivative d/dt for 1-periodic samples at N nodes:
/// w(m) = pi (-1)^m cot(pi m / N), m = 1..N-1.
fn spectral_weights(n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n];
    for (m, wm) in w.iter_mut().enumerate().skip(1) {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *wm = sign * PI / (PI * m as f64 / n as f64).tan();
    }
    w
}

fn condition_number(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 || !min.is_finite() || !max.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// (1 / 2 pi i) times the contour integral of Tr(B^-1 B'), by the trapezoidal
/// rule with B' from spectral differentiation of the node samples.
pub fn log_residue(b: &dyn MatrixFamily, c: &Contour) -> Result<Complex64> {
    let n = c.nodes();
    let dim = b.dimension();
    let samples: Vec<DMatrix<Complex64>> = (0..n).into_par_iter().map(|i| b.eval(c.node(i))).collect();
    let inverses: Vec<DMatrix<Complex64>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            if m.nrows() != dim || m.ncols() != dim || m.iter().any(|z| !z.is_finite()) {
                return Err(Error::SingularOnContour { node: i });
            }
            if condition_number(m) > MAX_CONDITION {
                return Err(Error::SingularOnContour { node: i });
            }
            m.clone().try_inverse().ok_or(Error::SingularOnContour { node: i })
        })
        .collect::<Result<_>>()?;
    let w = spectral_weights(n);
    let traces: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut deriv = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
            for (m, &wm) in w.iter().enumerate().skip(1) {
                deriv += &samples[(i + n - m) % n] * Complex64::new(wm, 0.0);
            }
            (&inverses[i] * deriv).trace()
        })
        .collect();
    let total: KahanSum = traces.into_iter().collect();
    Ok(total.value() / (Complex64::new(0.0, 2.0 * PI) * n as f64))
}

fn round_to_integer(value: Complex64) -> Result<i64> {
    let r = value.re.round();
    if (value - r).norm() > INTEGER_TOL {
        return Err(Error::NotInteger { value: value.re });
    }
    Ok(r as i64)
}

/// Winding trace: the logarithmic residue rounded to the nearest integer.
pub fn winding_trace(b: &dyn MatrixFamily, c: &Contour) -> Result<i64> {
    round_to_integer(log_residue(b, c)?)
}

/// Null multiplicity of a family in diagonal form: the sum of the positive
/// exponents.
pub fn null_multiplicity(exponents: &[i64]) -> usize {
    exponents.iter().filter(|&&e| e > 0).map(|&e| e as usize).sum()
}

/// Winding number of f along the contour, from accumulated principal phase
/// increments between consecutive nodes.
pub fn scalar_winding<F>(f: F, c: &Contour) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let n = c.nodes();
    let values: Vec<Complex64> = (0..n).into_par_iter().map(|i| f(c.node(i))).collect::<Result<_>>()?;
    if let Some(i) = values.iter().position(|v| !v.is_finite() || v.norm() == 0.0) {
        return Err(Error::SingularOnContour { node: i });
    }
    let mut total = KahanSum::new();
    for i in 0..n {
        let next = (i + 1) % n;
        let jump = (values[next] / values[i]).arg();
        if jump.abs() > 0.5 * PI {
            return Err(Error::PhaseJump { node: i, next, jump });
        }
        total.add(Complex64::new(jump, 0.0));
    }
    Ok((total.value().re / (2.0 * PI)).round() as i64)
}

/// Scattering-pole multiplicity at the contour centre: minus the winding of
/// the normalized scattering coefficient of one mode.
pub fn scattering_pole_multiplicity(mode: &FunnelMode, c: &Contour, opts: &EvalOptions) -> Result<i64> {
    let s0 = c.center();
    if s0.re > 1.0 {
        return Err(Error::InvalidInput(format!("scattering poles are counted for Re s <= 1, got {s0}")));
    }
    let reach = (s0.norm() + c.radius() + 4.0) * 2.0;
    let poles: Vec<Complex64> = mode.lattice_within(reach).into_iter().map(|(p, _)| p).collect();
    let zeros: Vec<Complex64> = poles.iter().map(|p| 1.0 - p).collect();
    c.guard(poles.iter().chain(zeros.iter()))?;
    Ok(-scalar_winding(|s| normalized_smatrix_coeff(mode, s, opts), c)?)
}
