use rand::Rng;

use crate::corrcore::Sign;

/// Draws one outcome pair for analyser angles `a` and `b` (radians).
///
/// Marginals are fair coins and `P(s, t) = (1 − s·t·cos(b − a)) / 4`, so the
/// product has expectation `−cos(b − a)`.
pub fn sample_singlet_pair<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> (Sign, Sign) {
    let s = if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let p_equal = ((1.0 - (b - a).cos()) / 2.0).clamp(0.0, 1.0);
    let t = if rng.random::<f64>() < p_equal { s } else { -s };
    (s, t)
}

/// Closed-form singlet correlation `−cos(b − a)`.
pub fn singlet_correlation(a: f64, b: f64) -> f64 {
    -(b - a).cos()
}
