//! Violation-maximising searches over setting angles.
//!
//! A coarse pass over the full grid in every coordinate, then rounds of a
//! smaller grid (9 points per coordinate) on a box around the incumbent that
//! shrinks by `refinement_shrink` each round. The box is clamped to the grid
//! bounds. The incumbent is itself a candidate in each round, so the best
//! value never decreases. Ties go to the lexicographically smallest angles.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::ScanGrid;
use crate::error::Result;
use crate::models::CorrelationFunction;

const REFINE_POINTS: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    /// `(a, b, b′)` for the three-term search, `(a, a′, b, b′)` for CHSH.
    pub best_angles: Vec<f64>,
    /// Positive means the inequality is violated by this much.
    pub best_value: f64,
    /// Incumbent after the coarse pass and after each refinement round.
    pub history: Vec<SearchStep>,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchStep {
    pub angles: Vec<f64>,
    pub value: f64,
}

/// `|f(b − a) − f(b2 − a)| − (1 − f(b2 − b))`.
pub fn three_term_violation(f: &CorrelationFunction, a: f64, b: f64, b2: f64) -> Result<f64> {
    Ok((f.eval(b - a)? - f.eval(b2 - a)?).abs() - (1.0 - f.eval(b2 - b)?))
}

/// `|f(b − a) + f(b2 − a)| + |f(b − a2) − f(b2 − a2)| − 2`.
pub fn chsh_excess(f: &CorrelationFunction, a: f64, a2: f64, b: f64, b2: f64) -> Result<f64> {
    Ok((f.eval(b - a)? + f.eval(b2 - a)?).abs() + (f.eval(b - a2)? - f.eval(b2 - a2)?).abs() - 2.0)
}

/// Maximises [`three_term_violation`] over `(a, b, b′)`.
pub fn violation_search_three(f: &CorrelationFunction, grid: &ScanGrid) -> Result<SearchResult> {
    search::<3>(
        f,
        grid,
        |t, [a, b, b2]| (t(b - a) - t(b2 - a)).abs() - (1.0 - t(b2 - b)),
        |f, x| three_term_violation(f, x[0], x[1], x[2]),
    )
}

/// Maximises [`chsh_excess`] over `(a, a′, b, b′)`.
pub fn violation_search_chsh(f: &CorrelationFunction, grid: &ScanGrid) -> Result<SearchResult> {
    search::<4>(
        f,
        grid,
        |t, [a, a2, b, b2]| (t(b - a) + t(b2 - a)).abs() + (t(b - a2) - t(b2 - a2)).abs() - 2.0,
        |f, x| chsh_excess(f, x[0], x[1], x[2], x[3]),
    )
}

/// `(value, point)` ordered by value, then by reversed lexicographic point so
/// that `max` prefers the smallest angles on ties.
fn better<const D: usize>(x: &(f64, [f64; D]), y: &(f64, [f64; D])) -> bool {
    match x.0.partial_cmp(&y.0) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) | None => false,
        Some(Ordering::Equal) => x.1.iter().partial_cmp(y.1.iter()) == Some(Ordering::Less),
    }
}

fn search<const D: usize>(
    f: &CorrelationFunction,
    grid: &ScanGrid,
    coarse: impl Fn(&dyn Fn(isize) -> f64, [isize; D]) -> f64 + Sync,
    exact: impl Fn(&CorrelationFunction, &[f64; D]) -> Result<f64> + Sync,
) -> Result<SearchResult> {
    let span = grid.hi - grid.lo;
    f.check_covers(-span, span)?;
    let n = grid.steps;
    let res = grid.resolution();

    // Objectives depend on angle differences only, which on the grid are
    // integer multiples of the resolution.
    let offset = n as isize - 1;
    let table: Vec<f64> = (-offset..=offset)
        .map(|k| f.eval((k as f64 * res).clamp(-span, span)))
        .collect::<Result<_>>()?;
    let lookup = |k: isize| table[(k + offset) as usize];

    let total = n.pow(D as u32);
    let inner = total / n;
    let (best_value, best_idx) = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut best = (f64::NEG_INFINITY, [0isize; D]);
            let mut idx = [0isize; D];
            for rest in 0..inner {
                idx[0] = first as isize;
                let mut r = rest;
                for d in (1..D).rev() {
                    idx[d] = (r % n) as isize;
                    r /= n;
                }
                let v = coarse(&lookup, idx);
                // indices are visited in lexicographic order
                if v > best.0 {
                    best = (v, idx);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::NEG_INFINITY, [0isize; D]), |acc, x| {
            if x.0 > acc.0 {
                x
            } else {
                acc
            }
        });

    let mut best = (best_value, best_idx.map(|i| grid.point(i as usize)));
    // re-evaluate the incumbent exactly so all rounds compare like with like
    best.0 = exact(f, &best.1)?;
    let step = |b: &(f64, [f64; D])| SearchStep {
        angles: b.1.to_vec(),
        value: b.0,
    };
    let mut history = vec![step(&best)];
    let mut evaluations = total as u64 + 1;

    let mut half = res;
    for _ in 0..grid.refinement_rounds {
        let centre = best.1;
        let axes: Vec<Vec<f64>> = centre
            .iter()
            .map(|&c| {
                let (lo, hi) = ((c - half).max(grid.lo), (c + half).min(grid.hi));
                let mut pts: Vec<f64> = (0..REFINE_POINTS)
                    .map(|k| lo + (hi - lo) * k as f64 / (REFINE_POINTS - 1) as f64)
                    .collect();
                pts.push(c);
                pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                pts.dedup();
                pts
            })
            .collect();
        let count: usize = axes.iter().map(Vec::len).product();
        let candidates: Vec<(f64, [f64; D])> = (0..count)
            .into_par_iter()
            .map(|mut r| {
                let mut x = [0.0; D];
                for d in (0..D).rev() {
                    x[d] = axes[d][r % axes[d].len()];
                    r /= axes[d].len();
                }
                Ok((exact(f, &x)?, x))
            })
            .collect::<Result<_>>()?;
        evaluations += count as u64;
        for c in candidates {
            if better(&c, &best) {
                best = c;
            }
        }
        history.push(step(&best));
        half *= grid.refinement_shrink;
    }

    Ok(SearchResult {
        best_angles: best.1.to_vec(),
        best_value: best.0,
        history,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrcore::{check_inequality_four, check_inequality_three};
    use crate::wrap_angle;
    use std::f64::consts::{PI, SQRT_2};

    fn angle_grid() -> ScanGrid {
        ScanGrid::new(-PI, PI, 64).unwrap()
    }

    #[test]
    fn neg_cosine_three_term_reaches_two() {
        let r = violation_search_three(&CorrelationFunction::NegCosine, &angle_grid()).unwrap();
        assert!((r.best_value - 2.0).abs() < 1e-6, "{}", r.best_value);
        let [a, b, b2] = [r.best_angles[0], r.best_angles[1], r.best_angles[2]];
        assert!(wrap_angle(b - a).abs() < 1e-3);
        assert!((wrap_angle(b2 - a).abs() - PI).abs() < 1e-3);
    }

    #[test]
    fn thirty_degree_configuration() {
        let v = three_term_violation(
            &CorrelationFunction::NegCosine,
            0.0,
            30f64.to_radians(),
            150f64.to_radians(),
        )
        .unwrap();
        assert!((v - 1.2321).abs() < 1e-4);
    }

    #[test]
    fn neg_cosine_chsh_reaches_tsirelson_excess() {
        let r = violation_search_chsh(&CorrelationFunction::NegCosine, &angle_grid()).unwrap();
        assert!(
            (r.best_value - (2.0 * SQRT_2 - 2.0)).abs() < 1e-6,
            "{}",
            r.best_value
        );
    }

    #[test]
    fn found_angles_reproduce_slack() {
        let grid = angle_grid();
        for f in [CorrelationFunction::NegCosine, CorrelationFunction::Cosine] {
            let r = violation_search_three(&f, &grid).unwrap();
            assert!(r.best_value > 0.0);
            let x = &r.best_angles;
            let c = |d: f64| f.eval(d).unwrap();
            let slack =
                check_inequality_three(c(x[1] - x[0]), c(x[2] - x[0]), c(x[2] - x[1])).unwrap();
            assert!((slack + r.best_value).abs() < 1e-6);

            let r = violation_search_chsh(&f, &grid).unwrap();
            assert!(r.best_value > 0.0);
            let x = &r.best_angles;
            let slack = check_inequality_four(
                c(x[2] - x[0]),
                c(x[3] - x[0]),
                c(x[2] - x[1]),
                c(x[3] - x[1]),
            )
            .unwrap();
            assert!((slack + r.best_value).abs() < 1e-6);
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let grid = ScanGrid::with_refinement(-PI, PI, 16, 6, 0.3).unwrap();
        for f in [
            CorrelationFunction::NegCosine,
            CorrelationFunction::BellLinear,
        ] {
            for r in [
                violation_search_three(&f, &grid).unwrap(),
                violation_search_chsh(&f, &grid).unwrap(),
            ] {
                assert_eq!(r.history.len(), 7);
                assert!(
                    r.history.windows(2).all(|w| w[1].value >= w[0].value),
                    "{:?}",
                    r.history
                );
            }
        }
    }

    #[test]
    fn rotation_invariance() {
        let shift = 17f64.to_radians();
        let g0 = ScanGrid::new(-PI, PI, 32).unwrap();
        let g1 = ScanGrid::new(-PI + shift, PI + shift, 32).unwrap();
        let f = CorrelationFunction::NegCosine;
        let (r0, r1) = (
            violation_search_chsh(&f, &g0).unwrap(),
            violation_search_chsh(&f, &g1).unwrap(),
        );
        assert!((r0.best_value - r1.best_value).abs() < 1e-9);
        let (r0, r1) = (
            violation_search_three(&f, &g0).unwrap(),
            violation_search_three(&f, &g1).unwrap(),
        );
        assert!((r0.best_value - r1.best_value).abs() < 1e-9);
    }

    #[test]
    fn bell_linear_chsh_attains_but_never_exceeds() {
        let r = violation_search_chsh(&CorrelationFunction::BellLinear, &angle_grid()).unwrap();
        assert!(r.best_value.abs() < 1e-9, "{}", r.best_value);
    }

    #[test]
    fn exponential_never_violates() {
        let f = CorrelationFunction::exponential(0.5).unwrap();
        let r = violation_search_three(&f, &ScanGrid::new(0.0, 3.0, 40).unwrap()).unwrap();
        assert!(r.best_value <= 1e-12);
    }

    #[test]
    fn constant_zero_gives_minus_two() {
        let t = crate::models::Table::new(vec![(-10.0, 0.0), (10.0, 0.0)]).unwrap();
        let r = violation_search_chsh(&CorrelationFunction::Tabulated(t), &angle_grid()).unwrap();
        assert_eq!(r.best_value, -2.0);
    }

    #[test]
    fn tabulated_must_cover_the_differences() {
        let t = crate::models::Table::new(vec![(-1.0, 0.0), (1.0, 0.0)]).unwrap();
        assert!(violation_search_three(&CorrelationFunction::Tabulated(t), &angle_grid()).is_err());
    }
}
