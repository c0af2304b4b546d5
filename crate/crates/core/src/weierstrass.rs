//! Truncated genus-2 Weierstrass products over resonance multisets.

use num_complex::Complex64;

use crate::ends::{funnel_resonances, resonance_order, FunnelTwist};
use crate::error::{Error, Result};
use crate::specfun::{log_e2, EvalOptions, KahanSum};

/// Points closer than this are treated as one point.
pub const MERGE_TOL: f64 = 1e-12;

/// Finite multiset of complex points with positive multiplicities.
///
/// Entries are kept sorted by (|s|, Re s, Im s). Mass at the origin is kept
/// separately in `m0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResonanceMultiset {
    entries: Vec<(Complex64, usize)>,
    m0: usize,
}

impl ResonanceMultiset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a multiset, merging points within `MERGE_TOL` and dropping zero
    /// multiplicities.
    pub fn from_points<I>(points: I) -> Self
    where
        I: IntoIterator<Item = (Complex64, usize)>,
    {
        let mut raw: Vec<(Complex64, usize)> = points.into_iter().filter(|(_, m)| *m > 0).collect();
        raw.sort_by(|a, b| resonance_order(&a.0, &b.0));
        let mut m0 = 0;
        let mut entries: Vec<(Complex64, usize)> = Vec::with_capacity(raw.len());
        for (p, m) in raw {
            if p.norm() <= MERGE_TOL {
                m0 += m;
                continue;
            }
            let mut merged = false;
            for e in entries.iter_mut().rev() {
                if p.norm() - e.0.norm() > MERGE_TOL {
                    break;
                }
                if (e.0 - p).norm() <= MERGE_TOL {
                    e.1 += m;
                    merged = true;
                    break;
                }
            }
            if !merged {
                entries.push((p, m));
            }
        }
        Self { entries, m0 }
    }

    pub fn with_zero_multiplicity(mut self, m0: usize) -> Self {
        self.m0 = m0;
        self
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (Complex64, usize)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[(Complex64, usize)] {
        &self.entries
    }

    /// Number of distinct non-zero points.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.m0 == 0
    }

    /// Sum of all multiplicities, including the one at the origin.
    pub fn total_multiplicity(&self) -> usize {
        self.m0 + self.entries.iter().map(|(_, m)| m).sum::<usize>()
    }

    /// Multiplicity of the point nearest to `s` if it lies within `tol`.
    pub fn multiplicity_at(&self, s: Complex64, tol: f64) -> usize {
        if s.norm() <= tol.max(MERGE_TOL) && self.m0 > 0 {
            return self.m0;
        }
        self.entries
            .iter()
            .filter(|(p, _)| (p - s).norm() <= tol)
            .map(|(_, m)| *m)
            .sum()
    }

    /// Distance from `s` to the nearest point (origin included when m0 > 0).
    pub fn distance(&self, s: Complex64) -> f64 {
        let base = if self.m0 > 0 { s.norm() } else { f64::INFINITY };
        self.entries.iter().map(|(p, _)| (p - s).norm()).fold(base, f64::min)
    }

    pub fn conj(&self) -> Self {
        Self::from_points(self.entries.iter().map(|(p, m)| (p.conj(), *m))).with_zero_multiplicity(self.m0)
    }

    /// Sub-multiset with |s| <= radius.
    pub fn within(&self, radius: f64) -> Self {
        Self {
            entries: self.entries.iter().filter(|(p, _)| p.norm() <= radius).copied().collect(),
            m0: self.m0,
        }
    }

    /// True if `self` is contained in `other` as a multiset.
    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        self.m0 <= other.m0
            && self
                .entries
                .iter()
                .all(|(p, m)| other.multiplicity_at(*p, MERGE_TOL) >= *m)
    }
}

/// A Weierstrass product truncated to the points with |mu| <= radius.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedProduct {
    multiset: ResonanceMultiset,
    radius: f64,
}

impl TruncatedProduct {
    pub fn new(multiset: ResonanceMultiset, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!("truncation radius must be positive, got {radius}")));
        }
        if let Some((p, _)) = multiset.iter().find(|(p, _)| p.norm() > radius) {
            return Err(Error::InvalidInput(format!("point {p} lies outside the truncation radius {radius}")));
        }
        Ok(Self { multiset, radius })
    }

    /// Product over the funnel resonances with |mu| <= radius.
    pub fn funnel(f: &FunnelTwist, radius: f64) -> Result<Self> {
        Self::new(funnel_resonances(f, radius), radius)
    }

    pub fn multiset(&self) -> &ResonanceMultiset {
        &self.multiset
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// log P(s) = m0 log s + sum mult log E2(s/mu), summed in the multiset order.
///
/// The imaginary part is the sum of the principal logs of the factors, which
/// is a continuous branch away from the zeros. Returns `-inf` real part at a
/// zero.
pub fn log_product(p: &TruncatedProduct, s: Complex64) -> Complex64 {
    let ms = &p.multiset;
    let mut acc = KahanSum::new();
    if ms.m0 > 0 {
        if s == Complex64::new(0.0, 0.0) {
            return Complex64::new(f64::NEG_INFINITY, 0.0);
        }
        acc.add(ms.m0 as f64 * s.ln());
    }
    for &(mu, m) in ms.iter() {
        if s == mu {
            return Complex64::new(f64::NEG_INFINITY, 0.0);
        }
        acc.add(m as f64 * log_e2(s / mu));
    }
    acc.value()
}

/// P(s) = s^m0 prod E2(s/mu)^mult.
pub fn product_eval(p: &TruncatedProduct, s: Complex64) -> Complex64 {
    let l = log_product(p, s);
    if l.re == f64::NEG_INFINITY {
        Complex64::new(0.0, 0.0)
    } else {
        l.exp()
    }
}

/// Third derivative of log P at s: 2 m0 / s^3 - sum mult 2/(mu - s)^3.
pub fn log_deriv3(p: &TruncatedProduct, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let ms = &p.multiset;
    let d = ms.distance(s);
    if d < opts.pole_exclusion {
        return Err(Error::PoleProximity { at: s, distance: d });
    }
    let mut acc = KahanSum::new();
    if ms.m0 > 0 {
        acc.add(2.0 * ms.m0 as f64 / (s * s * s));
    }
    for &(mu, m) in ms.iter() {
        let t = mu - s;
        acc.add(-2.0 * m as f64 / (t * t * t));
    }
    Ok(acc.value())
}

/// Number of funnel resonances with |s| <= r, counted with multiplicity.
pub fn counting_function(f: &FunnelTwist, r: f64) -> usize {
    funnel_resonances(f, r).total_multiplicity()
}
