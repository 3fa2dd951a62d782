//! Can a correlation function belong to a homogeneous ±1 process?
//!
//! Values of such a process read at three points form a matched triple, so
//! the three pairwise correlations must satisfy the three-term inequality
//! with any of the points as anchor. The scan checks this on every grid
//! triple; it certifies only to the grid resolution it reports.

use rayon::prelude::*;
use serde::Serialize;

use super::ScanGrid;
use crate::error::Result;
use crate::models::CorrelationFunction;

/// Violating triples kept in a verdict; `violation_count` still counts all.
const MAX_RECORDED: usize = 100_000;

/// Worst slack, its triple, recorded violations and violation count for one anchor.
type AnchorRow = (f64, [usize; 3], Vec<([usize; 3], f64)>, usize);

/// Slack above `-ROUNDING_TOLERANCE` is floating-point noise, not a violation.
pub const ROUNDING_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub triple: [f64; 3],
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub worst_triple: [f64; 3],
    pub worst_slack: f64,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub grid: ScanGrid,
    pub resolution: f64,
    /// Set when the function was negated so that it equals +1 at zero lag
    /// (an anticorrelated two-sided function read as one homogeneous process).
    pub sign_flipped: bool,
}

/// `(1 − f(x3 − x2)) − |f(x2 − x1) − f(x3 − x1)|`, the slack with `x1` as
/// anchor.
pub fn three_point_slack(f: &CorrelationFunction, x1: f64, x2: f64, x3: f64) -> Result<f64> {
    Ok((1.0 - f.eval(x3 - x2)?) - (f.eval(x2 - x1)? - f.eval(x3 - x1)?).abs())
}

/// Smallest slack over the three anchors, given the correlations at lags
/// `u = x2 − x1`, `v = x3 − x2` and `w = x3 − x1`.
#[inline]
fn triple_slack(cu: f64, cv: f64, cw: f64) -> f64 {
    let at_x1 = (1.0 - cv) - (cu - cw).abs();
    let at_x2 = (1.0 - cw) - (cu - cv).abs();
    let at_x3 = (1.0 - cu) - (cv - cw).abs();
    at_x1.min(at_x2).min(at_x3)
}

/// Scans every grid triple `x1 < x2 < x3` and reports the minimum slack and
/// the violating triples. The verdict is feasible when no slack falls below
/// `-ROUNDING_TOLERANCE`.
///
/// A function with `f(0) < 0` is scanned as `−f`.
pub fn wss_feasibility_scan(
    f: &CorrelationFunction,
    grid: &ScanGrid,
) -> Result<FeasibilityVerdict> {
    let span = grid.hi - grid.lo;
    f.check_covers(0.0, span)?;
    let res = grid.resolution();
    let n = grid.steps;
    let sign_flipped = f.eval(0.0)? < 0.0;
    let orient = if sign_flipped { -1.0 } else { 1.0 };
    let lag: Vec<f64> = (0..n)
        .map(|k| Ok(orient * f.eval((k as f64 * res).min(span))?))
        .collect::<Result<_>>()?;

    // per-anchor-index results, merged in index order for determinism
    let rows: Vec<AnchorRow> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut worst = f64::INFINITY;
            let mut at = [i, i, i];
            let mut found = Vec::new();
            let mut count = 0;
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = triple_slack(lag[j - i], lag[k - j], lag[k - i]);
                    if s < worst {
                        worst = s;
                        at = [i, j, k];
                    }
                    if s < -ROUNDING_TOLERANCE {
                        count += 1;
                        if found.len() < MAX_RECORDED {
                            found.push(([i, j, k], s));
                        }
                    }
                }
            }
            (worst, at, found, count)
        })
        .collect();

    let mut worst_slack = f64::INFINITY;
    let mut worst = [0, 1, 2];
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for (w, at, found, count) in rows {
        if w < worst_slack {
            worst_slack = w;
            worst = at;
        }
        violation_count += count;
        for (t, s) in found {
            if violations.len() < MAX_RECORDED {
                violations.push(Violation {
                    triple: t.map(|k| grid.point(k)),
                    slack: s,
                });
            }
        }
    }
    if !worst_slack.is_finite() {
        // fewer than three grid points: nothing to violate
        worst_slack = 0.0;
    }
    Ok(FeasibilityVerdict {
        feasible: worst_slack >= -ROUNDING_TOLERANCE,
        worst_triple: worst.map(|k| grid.point(k.min(n - 1))),
        worst_slack,
        violations,
        violation_count,
        grid: *grid,
        resolution: res,
        sign_flipped,
    })
}
