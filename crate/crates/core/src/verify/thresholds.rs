//! Every pass/fail threshold used by the suite, in one place.
//!
//! A check passes when its measured value is at most the threshold. Counting
//! checks measure the number of mismatches and use 0.

pub const THRESHOLDS: &[(&str, f64)] = &[
    ("specfun.gamma_reflection", 1e-10),
    ("specfun.gamma_recurrence", 1e-11),
    ("specfun.bessel_wronskian", 1e-8),
    ("specfun.polygamma_differences", 1e-5),
    ("specfun.hyp2f1_entire_in_c", 1e-12),
    ("ends.nesting", 0.0),
    ("ends.conjugation", 0.0),
    ("ends.brute_force_count", 0.0),
    ("ends.no_half_point", 0.0),
    ("funnel.functional_equation", 1e-9),
    ("funnel.unitarity", 1e-10),
    ("funnel.half_point", 1e-10),
    ("funnel.reduced_consistency", 1e-10),
    ("funnel.v0_reflection", 1e-10),
    ("funnel.v0_ode", 1e-5),
    ("funnel.intertwining", 1e-8),
    // max/min of |S| k^(1 - 2 Re s) over the k-range
    ("funnel.symbol_decay", 1.5),
    ("cusp.kernel_symmetry", 0.0),
    ("cusp.mode_ode", 1e-6),
    ("cusp.jump", 1e-6),
    ("cusp.k_order_reflection", 1e-9),
    ("cusp.poisson_limit", 1e-9),
    ("weierstrass.conjugation", 1e-10),
    ("weierstrass.truncation_stability", 0.0),
    // max of N(r) omega / (dim V r^2); the asymptote is pi/2
    ("weierstrass.counting_growth", 2.0),
    // |ratio - 4| of successive tail differences under doubling of M
    ("weierstrass.mode_tail", 1.0),
    ("gs.constructed_families", 0.01),
    ("gs.node_doubling", 0.0),
    ("gs.multiplicativity", 0.0),
    ("gs.log_residue_identity", 0.0),
    ("gs.lattice_winding", 0.0),
    ("verify.factorization_residual", 1e-4),
    // |ratio - 4|: accepted ratios lie in [3, 5]
    ("verify.factorization_ratio", 1.0),
    ("verify.half_point", 1e-10),
    ("verify.poisson_asymptotics", 1e-3),
    // |slope + 2|
    ("verify.symbol_asymptotics", 0.15),
];

/// Threshold registered under `name`.
///
/// # Panics
///
/// If `name` is not in [`THRESHOLDS`].
pub fn threshold(name: &str) -> f64 {
    THRESHOLDS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .unwrap_or_else(|| panic!("no threshold registered for {name}"))
}
