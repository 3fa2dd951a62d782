use serde::Serialize;

use super::check_unit;
use super::correlation::product_sum;
use super::stream::BinaryStream;
use crate::error::Result;

/// Evaluation of a finite-data identity.
///
/// Both sides are kept as integers scaled by the stream length `n`, so
/// `holds` is decided without rounding. `lhs`, `rhs` and `slack` are the
/// same quantities divided by `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    /// Σ x_i·y_i for each correlation term, in argument order.
    pub exact_numerators: Vec<i64>,
    pub lhs_numerator: i64,
    pub rhs_numerator: i64,
}

impl IdentityReport {
    fn from_scaled(n: usize, lhs_num: i64, rhs_num: i64, numerators: Vec<i64>) -> Self {
        let nf = n as f64;
        Self {
            n: n as u64,
            lhs: lhs_num as f64 / nf,
            rhs: rhs_num as f64 / nf,
            slack: (rhs_num - lhs_num) as f64 / nf,
            holds: rhs_num >= lhs_num,
            exact_numerators: numerators,
            lhs_numerator: lhs_num,
            rhs_numerator: rhs_num,
        }
    }
}

/// `|⟨ab⟩ − ⟨ab2⟩| ≤ 1 − ⟨b·b2⟩` on three equal-length streams.
///
/// Numerators are reported in the order `ab`, `ab2`, `b·b2`.
pub fn bell_identity_three(
    a: &BinaryStream,
    b: &BinaryStream,
    b2: &BinaryStream,
) -> Result<IdentityReport> {
    let ab = product_sum(a, b)?;
    let ab2 = product_sum(a, b2)?;
    let bb2 = product_sum(b, b2)?;
    let n = a.len();
    Ok(IdentityReport::from_scaled(
        n,
        (ab - ab2).abs(),
        n as i64 - bb2,
        vec![ab, ab2, bb2],
    ))
}

/// `|⟨ab⟩ + ⟨ab2⟩| + |⟨a2·b⟩ − ⟨a2·b2⟩| ≤ 2` on four equal-length streams.
///
/// Numerators are reported in the order `ab`, `ab2`, `a2·b`, `a2·b2`.
pub fn bell_identity_four(
    a: &BinaryStream,
    a2: &BinaryStream,
    b: &BinaryStream,
    b2: &BinaryStream,
) -> Result<IdentityReport> {
    let ab = product_sum(a, b)?;
    let ab2 = product_sum(a, b2)?;
    let a2b = product_sum(a2, b)?;
    let a2b2 = product_sum(a2, b2)?;
    let n = a.len();
    Ok(IdentityReport::from_scaled(
        n,
        (ab + ab2).abs() + (a2b - a2b2).abs(),
        2 * n as i64,
        vec![ab, ab2, a2b, a2b2],
    ))
}

/// Slack of the three-term inequality on correlation values:
/// `(1 − c_bb2) − |c_ab − c_ab2|`. Negative slack means no ±1 data set can
/// produce these three correlations together.
pub fn check_inequality_three(c_ab: f64, c_ab2: f64, c_bb2: f64) -> Result<f64> {
    check_unit("c_ab", c_ab)?;
    check_unit("c_ab2", c_ab2)?;
    check_unit("c_bb2", c_bb2)?;
    Ok((1.0 - c_bb2) - (c_ab - c_ab2).abs())
}

/// Slack of the CHSH inequality: `2 − (|c_ab + c_ab2| + |c_a2b − c_a2b2|)`.
pub fn check_inequality_four(c_ab: f64, c_ab2: f64, c_a2b: f64, c_a2b2: f64) -> Result<f64> {
    check_unit("c_ab", c_ab)?;
    check_unit("c_ab2", c_ab2)?;
    check_unit("c_a2b", c_a2b)?;
    check_unit("c_a2b2", c_a2b2)?;
    Ok(2.0 - ((c_ab + c_ab2).abs() + (c_a2b - c_a2b2).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrcore::{correlate, Sign};
    use crate::error::BellError;
    use proptest::prelude::*;

    fn s(v: &[i64]) -> BinaryStream {
        BinaryStream::from_ints(v.iter().copied()).unwrap()
    }

    #[test]
    fn identical_streams_give_equality() {
        let x = s(&[1, 1, 1, 1]);
        let r = bell_identity_three(&x, &x, &x).unwrap();
        assert_eq!((r.lhs, r.rhs, r.slack), (0.0, 0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn two_trial_example_is_tight() {
        let r = bell_identity_three(&s(&[1, -1]), &s(&[1, 1]), &s(&[-1, 1])).unwrap();
        assert_eq!(r.exact_numerators, vec![0, -2, 0]);
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.holds);
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn four_identity_all_ones_is_tight() {
        let x = s(&[1, 1, 1]);
        let r = bell_identity_four(&x, &x, &x, &x).unwrap();
        assert_eq!((r.lhs, r.rhs), (2.0, 2.0));
        assert!(r.holds);
    }

    #[test]
    fn four_identity_degenerate_collapse() {
        let a = s(&[1, -1, -1, 1, 1]);
        let b = s(&[1, 1, -1, -1, 1]);
        let r = bell_identity_four(&a, &a, &b, &b).unwrap();
        let c = correlate(&a, &b).unwrap();
        assert_eq!(r.lhs, 2.0 * c.value.abs());
        assert!(r.holds);
    }

    #[test]
    fn identities_reject_mismatched_lengths() {
        let x = s(&[1, 1]);
        let y = s(&[1]);
        assert!(matches!(
            bell_identity_three(&x, &x, &y),
            Err(BellError::LengthMismatch { .. })
        ));
        assert!(matches!(
            bell_identity_four(&x, &y, &x, &x),
            Err(BellError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn inequality_three_examples() {
        assert_eq!(check_inequality_three(-1.0, -1.0, 1.0).unwrap(), 0.0);
        // negative cosine at 0°, 30°, 150°
        let c = |d: f64| -d.to_radians().cos();
        let slack = check_inequality_three(c(30.0), c(150.0), c(120.0)).unwrap();
        assert!((slack - (0.5 - 3f64.sqrt())).abs() < 1e-12);
        assert!((slack + 1.2321).abs() < 1e-4);
        let h = -std::f64::consts::FRAC_1_SQRT_2;
        let slack = check_inequality_three(0.0, h, h).unwrap();
        assert!((slack - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inequality_four_examples() {
        assert_eq!(check_inequality_four(1.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(check_inequality_four(0.0, 0.0, 0.0, 0.0).unwrap(), 2.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let slack = check_inequality_four(-h, -h, h, -h).unwrap();
        assert!((slack - (2.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn inequality_domain_errors() {
        assert!(matches!(
            check_inequality_three(1.5, 0.0, 0.0),
            Err(BellError::Domain { name: "c_ab", .. })
        ));
        assert!(matches!(
            check_inequality_four(0.0, 0.0, 0.0, -1.01),
            Err(BellError::Domain { name: "c_a2b2", .. })
        ));
        assert!(check_inequality_three(f64::NAN, 0.0, 0.0).is_err());
    }

    fn arb_streams(k: usize) -> impl Strategy<Value = Vec<BinaryStream>> {
        (1usize..300).prop_flat_map(move |n| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), n), k).prop_map(|vs| {
                vs.into_iter()
                    .map(|v| {
                        BinaryStream::new(
                            v.into_iter()
                                .map(|p| if p { Sign::Plus } else { Sign::Minus })
                                .collect(),
                        )
                        .unwrap()
                    })
                    .collect()
            })
        })
    }

    proptest! {
        #[test]
        fn three_identity_always_holds(v in arb_streams(3)) {
            let r = bell_identity_three(&v[0], &v[1], &v[2]).unwrap();
            prop_assert!(r.holds);
            prop_assert!(r.slack >= 0.0);
            // the float inequality on the same data agrees
            let c = |x, y| correlate(x, y).unwrap().value;
            let slack = check_inequality_three(c(&v[0], &v[1]), c(&v[0], &v[2]), c(&v[1], &v[2])).unwrap();
            prop_assert!(slack >= -1e-12);
        }

        #[test]
        fn four_identity_always_holds(v in arb_streams(4)) {
            let r = bell_identity_four(&v[0], &v[1], &v[2], &v[3]).unwrap();
            prop_assert!(r.holds);
            prop_assert_eq!(r.holds, r.slack >= 0.0);
        }
    }
}
