use crate::gedanken::{Acquisition, ViolationReport};

/// Unmatched slack must fall this many standard errors below zero before a
/// violation counts as significant.
pub const SIGNIFICANCE_SIGMAS: f64 = 4.0;

/// Fills in `stderr_of_slack` by first-order propagation.
///
/// Each correlation enters the slack with coefficient ±1, so for independent
/// runs the standard errors add in quadrature. Matched reports are exact and
/// get zero.
pub fn slack_statistics(mut report: ViolationReport) -> ViolationReport {
    report.violated = report.slack < 0.0;
    match report.acquisition {
        Acquisition::Matched => {
            report.stderr_of_slack = 0.0;
            report.significant = false;
        }
        Acquisition::Unmatched => {
            report.stderr_of_slack = report
                .correlations
                .iter()
                .map(|c| c.estimate.stderr.powi(2))
                .sum::<f64>()
                .sqrt();
            report.significant = report.slack < -SIGNIFICANCE_SIGMAS * report.stderr_of_slack;
        }
    }
    report
}
