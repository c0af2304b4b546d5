//! Model ends and their twists.
//!
//! A funnel end is described by the length of its closed geodesic and the
//! eigen-phases of the holonomy; a cusp end by the eigen-phases of the
//! parabolic generator. Phases are fractions of a full turn in `[0, 1)`,
//! listed with repetition.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funnel::FunnelMode;
use crate::weierstrass::ResonanceMultiset;

/// Eigen-phase of a holonomy, `lambda = exp(2 pi i theta)`.
///
/// Rational input is kept exact so that the special phases 0 and 1/2 are
/// recognised without float comparison.
#[derive(Debug, Clone, Copy)]
pub enum Phase {
    Rational(Ratio<i64>),
    Float(f64),
}

impl Phase {
    pub fn rational(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidInput("phase denominator is zero".into()));
        }
        let r = Ratio::new(numer, denom);
        if r < Ratio::from_integer(0) || r >= Ratio::from_integer(1) {
            return Err(Error::InvalidInput(format!("phase {r} is outside [0, 1)")));
        }
        Ok(Phase::Rational(r))
    }

    pub fn float(theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::InvalidInput(format!("phase {theta} is outside [0, 1)")));
        }
        Ok(Phase::Float(theta))
    }

    pub fn zero() -> Self {
        Phase::Rational(Ratio::from_integer(0))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Phase::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            Phase::Float(x) => x,
        }
    }

    /// k + theta. Rational phases are shifted exactly and rounded once, so
    /// that k + theta and -(k' + theta') agree bit for bit when they are equal.
    pub fn shifted(&self, k: i64) -> f64 {
        match *self {
            Phase::Rational(r) => {
                let q = *r.denom();
                (k * q + *r.numer()) as f64 / q as f64
            }
            Phase::Float(x) => k as f64 + x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Phase::Rational(r) => *r.numer() == 0,
            Phase::Float(x) => x == 0.0,
        }
    }

    pub fn is_half(&self) -> bool {
        match *self {
            Phase::Rational(r) => r == Ratio::new(1, 2),
            Phase::Float(x) => x == 0.5,
        }
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Phase::Rational(a), Phase::Rational(b)) => a == b,
            _ => self.value() == other.value(),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Rational(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Phase::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Phase::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A funnel end: central geodesic length and holonomy eigen-phases.
#[derive(Debug, Clone, PartialEq)]
pub struct FunnelTwist {
    length: f64,
    phases: Vec<Phase>,
}

impl FunnelTwist {
    pub fn new(length: f64, phases: Vec<Phase>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidInput(format!("funnel length must be positive, got {length}")));
        }
        if phases.is_empty() {
            return Err(Error::InvalidInput("funnel needs at least one phase".into()));
        }
        Ok(Self { length, phases })
    }

    /// Untwisted funnel of the given length.
    pub fn trivial(length: f64) -> Result<Self> {
        Self::new(length, vec![Phase::zero()])
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// omega = 2 pi / length.
    pub fn omega(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// Multiplicity of `theta` among the phases.
    pub fn multiplicity(&self, theta: &Phase) -> usize {
        self.phases.iter().filter(|p| *p == theta).count()
    }

    /// Distinct phases with their multiplicities, in order of first appearance.
    pub fn distinct_phases(&self) -> Vec<(Phase, usize)> {
        let mut out: Vec<(Phase, usize)> = Vec::new();
        for p in &self.phases {
            match out.iter_mut().find(|(q, _)| q == p) {
                Some((_, m)) => *m += 1,
                None => out.push((*p, 1)),
            }
        }
        out
    }

    /// Fourier mode `k` of eigenbasis vector `j`.
    pub fn mode(&self, j: usize, k: i64) -> Result<FunnelMode> {
        let theta = self.phases.get(j).ok_or_else(|| {
            Error::InvalidInput(format!("eigenbasis index {j} out of range (dim {})", self.dim()))
        })?;
        Ok(FunnelMode::new(self.omega(), theta.value(), k))
    }
}

/// A cusp end: eigen-phases of the twist on the parabolic generator.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspTwist {
    phases: Vec<Phase>,
}

impl CuspTwist {
    pub fn new(phases: Vec<Phase>) -> Self {
        Self { phases }
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// Dimension of the eigenvalue-1 eigenspace.
    pub fn n_c(&self) -> usize {
        self.phases.iter().filter(|p| p.is_zero()).count()
    }

    /// Diagonal of the orthogonal projection onto the eigenvalue-1 eigenspace.
    pub fn e1_projection(&self) -> Vec<f64> {
        self.phases.iter().map(|p| if p.is_zero() { 1.0 } else { 0.0 }).collect()
    }

    /// Cusp frequency 2 pi (k + theta_j) of Fourier mode `k`.
    pub fn kappa(&self, j: usize, k: i64) -> Result<f64> {
        let theta = self.phases.get(j).ok_or_else(|| {
            Error::InvalidInput(format!("eigenbasis index {j} out of range (dim {})", self.phases.len()))
        })?;
        Ok(2.0 * PI * theta.shifted(k))
    }
}

/// The model ends of a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceEnds {
    pub funnels: Vec<FunnelTwist>,
    pub cusps: Vec<CuspTwist>,
}

impl SurfaceEnds {
    pub fn new(funnels: Vec<FunnelTwist>, cusps: Vec<CuspTwist>) -> Result<Self> {
        if funnels.is_empty() && cusps.is_empty() {
            return Err(Error::InvalidInput("a surface needs at least one end".into()));
        }
        Ok(Self { funnels, cusps })
    }

    pub fn n_f(&self) -> usize {
        self.funnels.len()
    }

    pub fn n_c(&self) -> usize {
        self.cusps.len()
    }

    pub fn funnel_mode(&self, index: ModeIndex) -> Result<FunnelMode> {
        self.funnels
            .get(index.funnel)
            .ok_or_else(|| Error::InvalidInput(format!("no funnel with index {}", index.funnel)))?
            .mode(index.j, index.k)
    }

    /// Union of the resonance multisets of all ends within `radius`.
    pub fn resonances(&self, radius: f64) -> ResonanceMultiset {
        let mut points = Vec::new();
        for f in &self.funnels {
            points.extend(funnel_resonances(f, radius).iter().map(|(p, m)| (*p, *m)));
        }
        for c in &self.cusps {
            if Complex64::new(0.5, 0.0).norm() <= radius {
                points.extend(cusp_resonances(c).iter().map(|(p, m)| (*p, *m)));
            }
        }
        ResonanceMultiset::from_points(points)
    }
}

/// (funnel, eigenbasis index, Fourier index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub funnel: usize,
    pub j: usize,
    pub k: i64,
}

/// Resonances of the model funnel inside the closed disk `|s| <= radius`:
/// the union over phases theta and signs p of -(1 + 2 N_0) + p i omega (theta + Z),
/// as a multiset. For theta in {0, 1/2} both signs produce the same points,
/// which therefore carry multiplicity two per phase.
pub fn funnel_resonances(f: &FunnelTwist, radius: f64) -> ResonanceMultiset {
    let omega = f.omega();
    let mut points = Vec::new();
    if radius > 0.0 {
        for phase in f.phases() {
            let theta = phase.value();
            for sign in [1.0, -1.0] {
                let mut m = 0u64;
                loop {
                    let re = -(1.0 + 2.0 * m as f64);
                    if -re > radius {
                        break;
                    }
                    let span = (radius * radius - re * re).max(0.0).sqrt() / omega;
                    let k_lo = (-theta - span).floor() as i64 - 1;
                    let k_hi = (-theta + span).ceil() as i64 + 1;
                    for k in k_lo..=k_hi {
                        let mu = Complex64::new(re, sign * omega * phase.shifted(k));
                        if mu.norm() <= radius {
                            points.push((mu, 1));
                        }
                    }
                    m += 1;
                }
            }
        }
    }
    ResonanceMultiset::from_points(points)
}

/// The cusp resolvent has its only pole at s = 1/2, of multiplicity n_c.
pub fn cusp_resonances(c: &CuspTwist) -> ResonanceMultiset {
    let n = c.n_c();
    if n == 0 {
        ResonanceMultiset::empty()
    } else {
        ResonanceMultiset::from_points([(Complex64::new(0.5, 0.0), n)])
    }
}

/// Boundary defining function of the funnel, 1/cosh r.
pub fn rho_funnel(r: f64) -> f64 {
    r.cosh().recip()
}

/// Order used for sorting resonance lists: |s|, then Re, then Im.
pub fn resonance_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then(a.re.total_cmp(&b.re))
        .then(a.im.total_cmp(&b.im))
}
