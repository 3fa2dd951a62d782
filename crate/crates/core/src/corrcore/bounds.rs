//! The range left open for a dependent correlation once the others are fixed.
//!
//! For three ±1 variables the correlations `(⟨ab⟩, ⟨ab′⟩, ⟨bb′⟩)` of any
//! joint law lie in the tetrahedron spanned by the four deterministic sign
//! patterns; slicing it at fixed `(⟨ab⟩, ⟨ab′⟩)` gives the interval below.
//! The four-variable case slices the CHSH polytope, bounded by the eight
//! sign variants of the CHSH inequality and the unit box.

use serde::Serialize;

use super::check_unit;
use crate::error::Result;

const ENDPOINT_TOLERANCE: f64 = 1e-12;

/// Interval of achievable values, or an explicit marker that none exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleInterval {
    Range { lower: f64, upper: f64 },
    Empty,
}

impl FeasibleInterval {
    /// Endpoints crossing by no more than `ENDPOINT_TOLERANCE` are rounding
    /// noise on a single-point interval and collapse onto their midpoint.
    fn from_endpoints(lower: f64, upper: f64) -> Self {
        if lower <= upper {
            FeasibleInterval::Range { lower, upper }
        } else if lower - upper <= ENDPOINT_TOLERANCE {
            let mid = 0.5 * (lower + upper);
            FeasibleInterval::Range {
                lower: mid,
                upper: mid,
            }
        } else {
            FeasibleInterval::Empty
        }
    }

    pub fn lower(&self) -> Option<f64> {
        match *self {
            FeasibleInterval::Range { lower, .. } => Some(lower),
            FeasibleInterval::Empty => None,
        }
    }

    pub fn upper(&self) -> Option<f64> {
        match *self {
            FeasibleInterval::Range { upper, .. } => Some(upper),
            FeasibleInterval::Empty => None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            FeasibleInterval::Range { lower, upper } => lower <= x && x <= upper,
            FeasibleInterval::Empty => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FeasibleInterval::Empty)
    }
}

/// Achievable `⟨bb′⟩` given `⟨ab⟩` and `⟨ab′⟩`:
/// `[|c_ab + c_ab2| − 1, 1 − |c_ab − c_ab2|]`.
pub fn third_correlation_bounds(c_ab: f64, c_ab2: f64) -> Result<FeasibleInterval> {
    check_unit("c_ab", c_ab)?;
    check_unit("c_ab2", c_ab2)?;
    Ok(FeasibleInterval::from_endpoints(
        (c_ab + c_ab2).abs() - 1.0,
        1.0 - (c_ab - c_ab2).abs(),
    ))
}

/// Achievable `⟨a′b′⟩` given `⟨ab⟩`, `⟨ab′⟩` and `⟨a′b⟩`.
///
/// The eight CHSH facets `|±x ± y ± z ± w| ≤ 2` with an odd number of minus
/// signs each bound `w` on one side; intersected with `[-1, 1]`.
pub fn fourth_correlation_bounds(c_ab: f64, c_ab2: f64, c_a2b: f64) -> Result<FeasibleInterval> {
    check_unit("c_ab", c_ab)?;
    check_unit("c_ab2", c_ab2)?;
    check_unit("c_a2b", c_a2b)?;
    let (x, y, z) = (c_ab, c_ab2, c_a2b);
    // w enters each facet with coefficient ±1; these are the four offsets
    // s with |s - w| <= 2 (equivalently |w - s| <= 2).
    let centres = [x + y + z, -x - y + z, -x + y - z, x - y - z];
    let lower = centres.iter().fold(-1.0f64, |acc, c| acc.max(c - 2.0));
    let upper = centres.iter().fold(1.0f64, |acc, c| acc.min(c + 2.0));
    Ok(FeasibleInterval::from_endpoints(lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::BellError;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn third_examples() {
        assert_eq!(
            third_correlation_bounds(1.0, 1.0).unwrap(),
            FeasibleInterval::Range {
                lower: 1.0,
                upper: 1.0
            }
        );
        assert_eq!(
            third_correlation_bounds(0.5, -0.5).unwrap(),
            FeasibleInterval::Range {
                lower: -1.0,
                upper: 0.0
            }
        );
        assert_eq!(
            third_correlation_bounds(0.0, 0.0).unwrap(),
            FeasibleInterval::Range {
                lower: -1.0,
                upper: 1.0
            }
        );
        assert!(matches!(
            third_correlation_bounds(1.2, 0.0),
            Err(BellError::Domain { .. })
        ));
    }

    #[test]
    fn fourth_examples() {
        assert_eq!(
            fourth_correlation_bounds(1.0, 1.0, 1.0).unwrap(),
            FeasibleInterval::Range {
                lower: 1.0,
                upper: 1.0
            }
        );
        assert_eq!(
            fourth_correlation_bounds(0.0, 0.0, 0.0).unwrap(),
            FeasibleInterval::Range {
                lower: -1.0,
                upper: 1.0
            }
        );
        let h = FRAC_1_SQRT_2;
        let iv = fourth_correlation_bounds(-h, -h, h).unwrap();
        // the quantum value -h for ⟨a′b′⟩ lies below the feasible range
        assert!(!iv.contains(-h));
        assert!((iv.lower().unwrap() - (3.0 * h - 2.0)).abs() < 1e-12);
        assert_eq!(iv.upper(), Some(1.0));
        assert!(fourth_correlation_bounds(0.0, -1.5, 0.0).is_err());
    }

    #[test]
    fn interval_is_never_empty_inside_the_box() {
        let ticks = [-1.0, -0.75, -0.3, 0.0, 0.2, 0.9, 1.0];
        for &x in &ticks {
            for &y in &ticks {
                assert!(!third_correlation_bounds(x, y).unwrap().is_empty());
                for &z in &ticks {
                    assert!(!fourth_correlation_bounds(x, y, z).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn empty_marker_behaves() {
        let p = FeasibleInterval::from_endpoints(0.2 + 1e-16, 0.2);
        assert!(!p.is_empty());
        let e = FeasibleInterval::from_endpoints(0.5, 0.1);
        assert!(e.is_empty());
        assert!(!e.contains(0.3));
        assert_eq!(e.lower(), None);
    }
}
