//! Finite-data Bell identities and the simulations built around them.
//!
//! * [`corrcore`] holds the exact arithmetic: ±1 streams, integer-accumulated
//!   correlations, the three- and four-stream identities, the inequality
//!   consistency checks and the feasible interval for a dependent correlation.
//! * [`models`] produces ±1 data: the singlet sampler, hidden-variable models,
//!   hypothesised correlation functions and the random telegraph process.
//! * [`gedanken`] runs the delayed-choice experiment with matched or
//!   unmatched acquisition.
//! * [`analysis`] scans correlation functions for consistency and searches
//!   for violating setting configurations.

pub mod analysis;
pub mod corrcore;
pub mod error;
pub mod gedanken;
pub mod models;
pub mod rng;

pub use error::{BellError, Result};

/// Degrees to radians.
pub fn deg(angle: f64) -> f64 {
    angle.to_radians()
}

/// Wraps an angle difference into [-π, π].
pub fn wrap_angle(d: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    if (-PI..=PI).contains(&d) {
        return d;
    }
    let r = (d + PI).rem_euclid(TAU) - PI;
    // rem_euclid maps +π onto -π; keep the sign of the input there.
    if r == -PI && d > 0.0 {
        PI
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_keeps_principal_range() {
        assert_eq!(wrap_angle(0.5), 0.5);
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(1.5 * PI) + 0.5 * PI).abs() < 1e-12);
        assert!((wrap_angle(-1.5 * PI) - 0.5 * PI).abs() < 1e-12);
        assert!(wrap_angle(2.0 * PI).abs() < 1e-12);
    }
}
