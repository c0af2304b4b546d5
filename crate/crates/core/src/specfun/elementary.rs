use num_complex::Complex64;

/// Weierstrass elementary factor of genus 2, E2(w) = (1 - w) exp(w + w^2/2).
pub fn e2_factor(w: Complex64) -> Complex64 {
    (1.0 - w) * (w + 0.5 * w * w).exp()
}

/// ln E2(w). For |w| <= 1/2 this is the series -sum_{n>=3} w^n/n, which is
/// the principal branch on the unit disk; elsewhere the principal logarithm
/// of (1 - w) is used. Returns -inf real part at w = 1.
pub fn log_e2(w: Complex64) -> Complex64 {
    if w.norm() <= 0.5 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = w * w * w;
        for n in 3..200 {
            let term = pow / n as f64;
            acc -= term;
            if term.norm() <= 1e-17 * acc.norm() {
                break;
            }
            pow *= w;
        }
        acc
    } else {
        (1.0 - w).ln() + w + 0.5 * w * w
    }
}

/// Japanese bracket <z> = (1 + |z|^2)^(1/2).
pub fn japanese_bracket(z: Complex64) -> f64 {
    1f64.hypot(z.norm())
}
