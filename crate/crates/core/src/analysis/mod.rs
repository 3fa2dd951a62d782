//! Consistency analysis of hypothesised correlation functions.

mod feasibility;
mod search;
mod stats;

pub use feasibility::{
    three_point_slack, wss_feasibility_scan, FeasibilityVerdict, Violation, ROUNDING_TOLERANCE,
};
pub use search::{
    chsh_excess, three_term_violation, violation_search_chsh, violation_search_three, SearchResult,
    SearchStep,
};
pub use stats::{slack_statistics, SIGNIFICANCE_SIGMAS};

use serde::{Deserialize, Serialize};

use crate::error::{BellError, Result};

/// Uniform grid on `[lo, hi]` with `steps` points, plus the shrinking-box
/// refinement schedule used by the searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub refinement_rounds: usize,
    pub refinement_shrink: f64,
}

impl ScanGrid {
    pub const DEFAULT_STEPS: usize = 64;
    pub const DEFAULT_ROUNDS: usize = 4;
    pub const DEFAULT_SHRINK: f64 = 0.25;

    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        Self::with_refinement(lo, hi, steps, Self::DEFAULT_ROUNDS, Self::DEFAULT_SHRINK)
    }

    pub fn with_refinement(
        lo: f64,
        hi: f64,
        steps: usize,
        refinement_rounds: usize,
        refinement_shrink: f64,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(BellError::Config(format!(
                "grid needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if steps < 2 {
            return Err(BellError::Config(format!(
                "grid needs at least 2 steps, got {steps}"
            )));
        }
        if !(refinement_shrink > 0.0 && refinement_shrink < 1.0) {
            return Err(BellError::Config(format!(
                "refinement shrink must lie in (0, 1), got {refinement_shrink}"
            )));
        }
        Ok(Self {
            lo,
            hi,
            steps,
            refinement_rounds,
            refinement_shrink,
        })
    }

    pub fn resolution(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.resolution()
    }
}
