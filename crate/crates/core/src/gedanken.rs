//! The delayed-choice experiment engine.
//!
//! Matched acquisition reads every setting off one hidden-variable draw per
//! trial, so its reports satisfy the identities exactly. Unmatched
//! acquisition measures each setting pair in its own run, the way the
//! correlations are obtained in practice, and carries no such guarantee.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::slack_statistics;
use crate::corrcore::{
    bell_identity_four, bell_identity_three, check_inequality_four, check_inequality_three,
    correlate, CorrelationEstimate, IdentityReport, MatchedStreamSet, Sign,
};
use crate::error::{BellError, Result};
use crate::models::{
    generate_matched_streams, generate_unmatched_runs, LhvModel, Probe, Side, Source,
};
use crate::rng::{domain, Substreams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Acquisition {
    Matched,
    Unmatched,
}

/// Settings are in radians.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentProtocol {
    pub acquisition: Acquisition,
    pub a_settings: Vec<f64>,
    pub b_settings: Vec<f64>,
    pub locality: bool,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentProtocol {
    fn validate(&self, a_count: usize) -> Result<()> {
        if self.trials == 0 {
            return Err(BellError::Usage("trial count must be at least 1".into()));
        }
        if self.a_settings.len() != a_count || self.b_settings.len() != 2 {
            return Err(BellError::Usage(format!(
                "expected {a_count} A-side and 2 B-side settings, got {} and {}",
                self.a_settings.len(),
                self.b_settings.len()
            )));
        }
        if self
            .a_settings
            .iter()
            .chain(&self.b_settings)
            .any(|x| !x.is_finite())
        {
            return Err(BellError::Usage("settings must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expression {
    ThreeTerm,
    FourTerm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledCorrelation {
    pub label: String,
    /// The two settings, radians.
    pub settings: [f64; 2],
    pub estimate: CorrelationEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub acquisition: Acquisition,
    pub expression: Expression,
    pub correlations: Vec<LabeledCorrelation>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub stderr_of_slack: f64,
    /// `slack < 0`.
    pub violated: bool,
    /// `slack < −4·stderr_of_slack`; never set for matched data.
    pub significant: bool,
    /// Exact identity evaluation, present for matched acquisition.
    pub identity: Option<IdentityReport>,
}

/// Streams from one delayed-choice acquisition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayedChoiceRun {
    pub streams: MatchedStreamSet,
    /// Number of streams generated, whether or not some coincide.
    pub distinct_stream_count: usize,
}

fn a_label(i: usize) -> &'static str {
    ["a", "a'"][i]
}

fn b_label(j: usize) -> &'static str {
    ["b", "b'"][j]
}

/// Runs the delayed-choice acquisition for one or two A settings and two B
/// settings.
///
/// With `locality` every setting yields one stream. Without it each B
/// readout depends on the A setting in force, so there is one B stream per
/// (b, a) combination: 6 streams for two A settings, still 3 for one.
pub fn run_delayed_choice(
    model: &LhvModel,
    a_settings: &[f64],
    b_settings: &[f64],
    locality: bool,
    n: usize,
    seed: u64,
) -> Result<DelayedChoiceRun> {
    if !(1..=2).contains(&a_settings.len()) || b_settings.len() != 2 {
        return Err(BellError::Usage(format!(
            "delayed choice needs 1 or 2 A-side and exactly 2 B-side settings, got {} and {}",
            a_settings.len(),
            b_settings.len()
        )));
    }
    if !locality && model.is_local() {
        return Err(BellError::Config(format!(
            "nonlocal acquisition requested but model `{}` has no nonlocal readout",
            model.name
        )));
    }
    let mut settings: Vec<(String, Probe)> = a_settings
        .iter()
        .enumerate()
        .map(|(i, &a)| (a_label(i).to_string(), Probe::a(a)))
        .collect();
    for (j, &b) in b_settings.iter().enumerate() {
        if locality {
            settings.push((b_label(j).to_string(), Probe::b(b)));
        } else if a_settings.len() == 1 {
            // with a single A setting the dependence does not multiply streams
            settings.push((b_label(j).to_string(), Probe::b_given(b, a_settings[0])));
        } else {
            for (i, &a) in a_settings.iter().enumerate() {
                settings.push((
                    format!("{}|{}", b_label(j), a_label(i)),
                    Probe::b_given(b, a),
                ));
            }
        }
    }
    let streams = generate_matched_streams(model, &settings, n, seed)?;
    Ok(DelayedChoiceRun {
        distinct_stream_count: streams.count(),
        streams,
    })
}

fn lhv_for_matched(source: &Source) -> Result<&LhvModel> {
    match source {
        Source::Lhv(m) => Ok(m),
        Source::Singlet => Err(BellError::Unsupported(
            "matched acquisition needs a hidden-variable model; the singlet sampler has no \
             shared hidden variable to read counterfactual settings from"
                .into(),
        )),
    }
}

fn b_probe(source: &Source, b: f64, a: f64, locality: bool) -> Result<Probe> {
    if locality {
        return Ok(Probe::b(b));
    }
    match source {
        Source::Lhv(m) if !m.is_local() => Ok(Probe::b_given(b, a)),
        _ => Err(BellError::Config(format!(
            "nonlocal acquisition requested but source `{}` has no nonlocal readout",
            source.name()
        ))),
    }
}

fn labeled(label: &str, settings: [f64; 2], sum: i64, n: usize) -> LabeledCorrelation {
    LabeledCorrelation {
        label: label.into(),
        settings,
        estimate: CorrelationEstimate::from_sum(sum, n as u64),
    }
}

fn finish(mut report: ViolationReport) -> Result<ViolationReport> {
    report = slack_statistics(report);
    if report.acquisition == Acquisition::Matched && report.violated {
        return Err(BellError::Invariant(format!(
            "matched data produced negative slack {}",
            report.slack
        )));
    }
    Ok(report)
}

/// Three-correlation experiment with settings `a`, `b`, `b′`.
///
/// The unmatched `(b, b′)` run needs same-side joint statistics and is
/// refused for the singlet source.
pub fn three_correlation_experiment(
    source: &Source,
    protocol: &ExperimentProtocol,
) -> Result<ViolationReport> {
    protocol.validate(1)?;
    let a = protocol.a_settings[0];
    let (b, b2) = (protocol.b_settings[0], protocol.b_settings[1]);
    let pair_settings = [[a, b], [a, b2], [b, b2]];
    let labels = ["ab", "ab'", "bb'"];

    match protocol.acquisition {
        Acquisition::Matched => {
            let model = lhv_for_matched(source)?;
            let run = run_delayed_choice(
                model,
                &protocol.a_settings,
                &protocol.b_settings,
                protocol.locality,
                protocol.trials,
                protocol.seed,
            )?;
            let s = run.streams.streams();
            let id = bell_identity_three(&s[0], &s[1], &s[2])?;
            let correlations = (0..3)
                .map(|k| {
                    labeled(
                        labels[k],
                        pair_settings[k],
                        id.exact_numerators[k],
                        protocol.trials,
                    )
                })
                .collect();
            finish(ViolationReport {
                acquisition: Acquisition::Matched,
                expression: Expression::ThreeTerm,
                correlations,
                lhs: id.lhs,
                rhs: id.rhs,
                slack: id.slack,
                stderr_of_slack: 0.0,
                violated: !id.holds,
                significant: false,
                identity: Some(id),
            })
        }
        Acquisition::Unmatched => {
            let pb = b_probe(source, b, a, protocol.locality)?;
            let pb2 = b_probe(source, b2, a, protocol.locality)?;
            let pairs = [(Probe::a(a), pb), (Probe::a(a), pb2), (pb, pb2)];
            let runs = generate_unmatched_runs(source, &pairs, protocol.trials, protocol.seed)?;
            let correlations = runs
                .iter()
                .enumerate()
                .map(|(k, (x, y))| {
                    Ok(LabeledCorrelation {
                        label: labels[k].into(),
                        settings: pair_settings[k],
                        estimate: correlate(x, y)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let c: Vec<f64> = correlations.iter().map(|l| l.estimate.value).collect();
            let slack = check_inequality_three(c[0], c[1], c[2])?;
            finish(ViolationReport {
                acquisition: Acquisition::Unmatched,
                expression: Expression::ThreeTerm,
                lhs: (c[0] - c[1]).abs(),
                rhs: 1.0 - c[2],
                slack,
                stderr_of_slack: 0.0,
                violated: slack < 0.0,
                significant: false,
                correlations,
                identity: None,
            })
        }
    }
}

/// CHSH experiment with settings `a`, `a′` and `b`, `b′`.
///
/// Matched acquisition requires locality: nonlocal readouts would produce
/// six streams, which the four-stream identity does not cover.
pub fn chsh_experiment(source: &Source, protocol: &ExperimentProtocol) -> Result<ViolationReport> {
    protocol.validate(2)?;
    let (a, a2) = (protocol.a_settings[0], protocol.a_settings[1]);
    let (b, b2) = (protocol.b_settings[0], protocol.b_settings[1]);
    let pair_settings = [[a, b], [a, b2], [a2, b], [a2, b2]];
    let labels = ["ab", "ab'", "a'b", "a'b'"];

    match protocol.acquisition {
        Acquisition::Matched => {
            if !protocol.locality {
                return Err(BellError::Config(
                    "matched four-correlation acquisition requires locality: nonlocal readouts \
                     give six data streams, which is inconsistent with the use of the \
                     four-stream identity"
                        .into(),
                ));
            }
            let model = lhv_for_matched(source)?;
            let run = run_delayed_choice(
                model,
                &protocol.a_settings,
                &protocol.b_settings,
                true,
                protocol.trials,
                protocol.seed,
            )?;
            let s = run.streams.streams();
            let id = bell_identity_four(&s[0], &s[1], &s[2], &s[3])?;
            let correlations = (0..4)
                .map(|k| {
                    labeled(
                        labels[k],
                        pair_settings[k],
                        id.exact_numerators[k],
                        protocol.trials,
                    )
                })
                .collect();
            finish(ViolationReport {
                acquisition: Acquisition::Matched,
                expression: Expression::FourTerm,
                correlations,
                lhs: id.lhs,
                rhs: id.rhs,
                slack: id.slack,
                stderr_of_slack: 0.0,
                violated: !id.holds,
                significant: false,
                identity: Some(id),
            })
        }
        Acquisition::Unmatched => {
            let mut pairs = Vec::with_capacity(4);
            for &[x, y] in &pair_settings {
                pairs.push((Probe::a(x), b_probe(source, y, x, protocol.locality)?));
            }
            let runs = generate_unmatched_runs(source, &pairs, protocol.trials, protocol.seed)?;
            let correlations = runs
                .iter()
                .enumerate()
                .map(|(k, (x, y))| {
                    Ok(LabeledCorrelation {
                        label: labels[k].into(),
                        settings: pair_settings[k],
                        estimate: correlate(x, y)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let c: Vec<f64> = correlations.iter().map(|l| l.estimate.value).collect();
            let slack = check_inequality_four(c[0], c[1], c[2], c[3])?;
            finish(ViolationReport {
                acquisition: Acquisition::Unmatched,
                expression: Expression::FourTerm,
                lhs: 2.0 - slack,
                rhs: 2.0,
                slack,
                stderr_of_slack: 0.0,
                violated: slack < 0.0,
                significant: false,
                correlations,
                identity: None,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalEstimate {
    /// Mean of `B(b′)` over accepted draws.
    pub conditional_mean: f64,
    /// Mean of `B(b′)` over every draw made.
    pub unconditional_mean: f64,
    /// Standard error of the conditional mean.
    pub stderr: f64,
    pub unconditional_stderr: f64,
    pub accepted: u64,
    pub draws: u64,
}

/// Estimates `E[B(b′) | A(a) = observed_a, B(b) = observed_b]` by rejection
/// sampling λ, next to the unconditional `E[B(b′)]`.
///
/// `None` for an observation drops that condition. Sampling stops at `n`
/// accepted draws or after `1024·n` draws, whichever comes first; if the
/// first `n` draws contain no accepted one the event is reported as having
/// no support.
#[allow(clippy::too_many_arguments)]
pub fn conditional_counterfactual(
    model: &LhvModel,
    a_setting: f64,
    b_setting: f64,
    b2_setting: f64,
    observed_a: Option<Sign>,
    observed_b: Option<Sign>,
    n: usize,
    seed: u64,
) -> Result<ConditionalEstimate> {
    if !model.is_local() {
        return Err(BellError::Usage(
            "conditioning requires a local model".into(),
        ));
    }
    if n == 0 {
        return Err(BellError::Usage("sample count must be at least 1".into()));
    }
    let subs = Substreams::new(seed, domain::CONDITIONAL, 0);
    let target = n as u64;
    let max_draws = target.saturating_mul(1024);
    let (pa, pb, pb2) = (
        Probe::a(a_setting),
        Probe::b(b_setting),
        Probe::b(b2_setting),
    );
    let read = |p: &Probe, l: f64| match p.side {
        Side::A => (model.readout_a)(p.angle, l),
        Side::B => (model.readout_b)(p.angle, l),
    };

    let (mut accepted, mut draws) = (0u64, 0u64);
    let (mut cond_sum, mut all_sum) = (0i64, 0i64);
    'outer: while draws < max_draws {
        let batch = target.min(max_draws - draws);
        let outcomes: Vec<(bool, Sign)> = (draws..draws + batch)
            .into_par_iter()
            .map(|i| {
                let lambda = model.lambda_law.draw(&mut subs.trial(i));
                let ok = observed_a.is_none_or(|s| read(&pa, lambda) == s)
                    && observed_b.is_none_or(|s| read(&pb, lambda) == s);
                (ok, read(&pb2, lambda))
            })
            .collect();
        for (ok, v) in outcomes {
            draws += 1;
            all_sum += v.value();
            if ok {
                accepted += 1;
                cond_sum += v.value();
                if accepted == target {
                    break 'outer;
                }
            }
        }
        if accepted == 0 {
            return Err(BellError::NoSupport { draws });
        }
    }

    let conditional_mean = cond_sum as f64 / accepted as f64;
    let unconditional_mean = all_sum as f64 / draws as f64;
    Ok(ConditionalEstimate {
        conditional_mean,
        unconditional_mean,
        stderr: ((1.0 - conditional_mean.powi(2)).max(0.0) / accepted as f64).sqrt(),
        unconditional_stderr: ((1.0 - unconditional_mean.powi(2)).max(0.0) / draws as f64).sqrt(),
        accepted,
        draws,
    })
}
