use std::fmt::Write as _;

use bell_core::analysis::{
    violation_search_chsh, violation_search_three, wss_feasibility_scan, SearchResult,
};
use bell_core::corrcore::{
    bell_identity_four, bell_identity_three, IdentityReport, MatchedStreamSet,
};
use bell_core::gedanken::{
    chsh_experiment, run_delayed_choice, three_correlation_experiment, Acquisition,
    ExperimentProtocol, ViolationReport,
};
use bell_core::models::CorrelationFunction;
use serde::Serialize;

use crate::args::{
    AcquisitionArg, ExperimentArgs, GenerateArgs, Locality, Objective, ScanArgs, StreamsArgs,
    VerifyArgs,
};
use crate::config::{self, deg6, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, to_json, write_atomic};
use crate::streamfile;

fn generate_streams(g: &GenerateArgs, seed: u64) -> CliResult<(MatchedStreamSet, usize)> {
    let model = config::hidden_variable_model(&g.model)?;
    let angles = config::parse_angles(&g.angles)?;
    let (a, b) = config::split_settings(&angles)?;
    let run = run_delayed_choice(
        &model,
        &a,
        &b,
        g.locality == Locality::Local,
        g.trials,
        seed,
    )?;

    // attach the setting to each label, e.g. `b'|a@45.000000`
    let setting = |role: &str| match role {
        "a" => a[0],
        "a'" => a[1],
        "b" => b[0],
        _ => b[1],
    };
    let members = run
        .streams
        .iter()
        .map(|(label, s)| {
            let role = label.split('|').next().unwrap_or(label);
            (format!("{label}@{:.6}", deg6(setting(role))), s.clone())
        })
        .collect();
    Ok((MatchedStreamSet::new(members)?, run.distinct_stream_count))
}

#[derive(Serialize)]
struct IdentityCheck {
    kind: &'static str,
    streams: Vec<String>,
    report: IdentityReport,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    config: &'a RunConfig,
    columns: &'a [String],
    trials: usize,
    holds: bool,
    checks: Vec<IdentityCheck>,
}

fn identity_checks(set: &MatchedStreamSet) -> CliResult<Vec<IdentityCheck>> {
    let s = set.streams();
    let l = set.labels();
    match s.len() {
        0..=2 => Err(CliError::Data(format!(
            "identity checks need at least 3 streams, found {}",
            s.len()
        ))),
        3 => Ok(vec![IdentityCheck {
            kind: "three",
            streams: l.to_vec(),
            report: bell_identity_three(&s[0], &s[1], &s[2])?,
        }]),
        4 => Ok(vec![IdentityCheck {
            kind: "four",
            streams: l.to_vec(),
            report: bell_identity_four(&s[0], &s[1], &s[2], &s[3])?,
        }]),
        k => {
            // every anchor with every unordered pair of the remaining streams
            let mut out = Vec::new();
            for i in 0..k {
                for j in 0..k {
                    for m in j + 1..k {
                        if j == i || m == i {
                            continue;
                        }
                        out.push(IdentityCheck {
                            kind: "three",
                            streams: vec![l[i].clone(), l[j].clone(), l[m].clone()],
                            report: bell_identity_three(&s[i], &s[j], &s[m])?,
                        });
                    }
                }
            }
            Ok(out)
        }
    }
}

pub fn verify_identity(args: &VerifyArgs) -> CliResult<()> {
    let (set, cfg) = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
            let mut cfg = RunConfig::new("verify-identity", args.output.format);
            cfg.input = Some(path.display().to_string());
            (streamfile::parse(&text)?, cfg)
        }
        None => {
            let seed = config::resolve_seed(args.generate.seed);
            let cfg = RunConfig::new("verify-identity", args.output.format)
                .with_generation(&args.generate, seed)?;
            (generate_streams(&args.generate, seed)?.0, cfg)
        }
    };
    let checks = identity_checks(&set)?;
    let holds = checks.iter().all(|c| c.report.holds);

    let json = to_json(&VerifyOutput {
        config: &cfg,
        columns: set.labels(),
        trials: set.trials(),
        holds,
        checks: checks
            .iter()
            .map(|c| IdentityCheck {
                kind: c.kind,
                streams: c.streams.clone(),
                report: c.report.clone(),
            })
            .collect(),
    })?;
    let mut csv = String::from("kind,streams,n,lhs_numerator,rhs_numerator,lhs,rhs,slack,holds\n");
    for c in &checks {
        let r = &c.report;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            c.kind,
            c.streams.join(";"),
            r.n,
            r.lhs_numerator,
            r.rhs_numerator,
            r.lhs,
            r.rhs,
            r.slack,
            r.holds
        );
    }
    emit(&args.output, &json, &csv)?;
    if !holds {
        return Err(CliError::Internal(
            "identity reported false on index-matched streams".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct CorrelationRow {
    label: String,
    settings_deg: [f64; 2],
    value: f64,
    n: u64,
    sum: i64,
    stderr: f64,
}

#[derive(Serialize)]
struct ExperimentOutput<'a> {
    config: &'a RunConfig,
    source: &'a str,
    acquisition: Acquisition,
    expression: bell_core::gedanken::Expression,
    correlations: Vec<CorrelationRow>,
    lhs: f64,
    rhs: f64,
    slack: f64,
    stderr_of_slack: f64,
    violated: bool,
    significant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    identity: Option<IdentityReport>,
}

pub fn experiment(args: &ExperimentArgs) -> CliResult<()> {
    let g = &args.generate;
    let seed = config::resolve_seed(g.seed);
    let mut cfg = RunConfig::new("experiment", args.output.format).with_generation(g, seed)?;
    cfg.acquisition = Some(args.acquisition);
    let source = config::source(&g.model)?;
    let angles = config::parse_angles(&g.angles)?;
    let (a, b) = config::split_settings(&angles)?;
    let three = a.len() == 1;
    let protocol = ExperimentProtocol {
        acquisition: match args.acquisition {
            AcquisitionArg::Matched => Acquisition::Matched,
            AcquisitionArg::Unmatched => Acquisition::Unmatched,
        },
        a_settings: a,
        b_settings: b,
        locality: g.locality == Locality::Local,
        trials: g.trials,
        seed,
    };
    let report: ViolationReport = if three {
        three_correlation_experiment(&source, &protocol)?
    } else {
        chsh_experiment(&source, &protocol)?
    };

    let rows: Vec<CorrelationRow> = report
        .correlations
        .iter()
        .map(|c| CorrelationRow {
            label: c.label.clone(),
            settings_deg: c.settings.map(deg6),
            value: c.estimate.value,
            n: c.estimate.n,
            sum: c.estimate.sum,
            stderr: c.estimate.stderr,
        })
        .collect();
    let mut csv = String::from("label,setting_1_deg,setting_2_deg,n,sum,value,stderr\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{:.6},{:.6},{},{},{},{}",
            r.label, r.settings_deg[0], r.settings_deg[1], r.n, r.sum, r.value, r.stderr
        );
    }
    let json = to_json(&ExperimentOutput {
        config: &cfg,
        source: source.name(),
        acquisition: report.acquisition,
        expression: report.expression,
        correlations: rows,
        lhs: report.lhs,
        rhs: report.rhs,
        slack: report.slack,
        stderr_of_slack: report.stderr_of_slack,
        violated: report.violated,
        significant: report.significant,
        identity: report.identity.clone(),
    })?;
    emit(&args.output, &json, &csv)
}

#[derive(Serialize)]
struct ViolationRow {
    triple: [f64; 3],
    slack: f64,
}

#[derive(Serialize)]
struct WssOutput<'a> {
    config: &'a RunConfig,
    function: &'a CorrelationFunction,
    feasible: bool,
    worst_triple: [f64; 3],
    worst_slack: f64,
    violation_count: usize,
    sign_flipped: bool,
    violations: Vec<ViolationRow>,
}

#[derive(Serialize)]
struct StepRow {
    round: usize,
    angles: Vec<f64>,
    value: f64,
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    config: &'a RunConfig,
    function: &'a CorrelationFunction,
    best_angles: Vec<f64>,
    best_value: f64,
    slack: f64,
    violated: bool,
    evaluations: u64,
    history: Vec<StepRow>,
}

pub fn scan(args: &ScanArgs) -> CliResult<()> {
    let f = config::correlation_function(&args.model)?;
    let (grid, echo) = config::scan_grid(&f, args.objective, args.grid.as_deref(), &args.refine)?;
    let mut cfg = RunConfig::new("scan", args.output.format);
    cfg.model = Some(args.model.clone());
    cfg.objective = Some(args.objective);
    cfg.grid = Some(echo);
    let angular = f.is_angular();
    let units = |x: f64| if angular { deg6(x) } else { x };

    let (json, csv) = match args.objective {
        Objective::Wss => {
            let v = wss_feasibility_scan(&f, &grid)?;
            let violations: Vec<ViolationRow> = v
                .violations
                .iter()
                .map(|x| ViolationRow {
                    triple: x.triple.map(units),
                    slack: x.slack,
                })
                .collect();
            let mut csv = String::from("x1,x2,x3,slack\n");
            for r in &violations {
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    r.triple[0], r.triple[1], r.triple[2], r.slack
                );
            }
            let json = to_json(&WssOutput {
                config: &cfg,
                function: &f,
                feasible: v.feasible,
                worst_triple: v.worst_triple.map(units),
                worst_slack: v.worst_slack,
                violation_count: v.violation_count,
                sign_flipped: v.sign_flipped,
                violations,
            })?;
            (json, csv)
        }
        Objective::Three | Objective::Chsh => {
            let r: SearchResult = if args.objective == Objective::Three {
                violation_search_three(&f, &grid)?
            } else {
                violation_search_chsh(&f, &grid)?
            };
            let names: &[&str] = if args.objective == Objective::Three {
                &["a", "b", "b2"]
            } else {
                &["a", "a2", "b", "b2"]
            };
            let history: Vec<StepRow> = r
                .history
                .iter()
                .enumerate()
                .map(|(round, s)| StepRow {
                    round,
                    angles: s.angles.iter().map(|&x| units(x)).collect(),
                    value: s.value,
                })
                .collect();
            let mut csv = format!("round,{},value\n", names.join(","));
            for h in &history {
                let angles: Vec<String> = h.angles.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(csv, "{},{},{}", h.round, angles.join(","), h.value);
            }
            let json = to_json(&SearchOutput {
                config: &cfg,
                function: &f,
                best_angles: r.best_angles.iter().map(|&x| units(x)).collect(),
                best_value: r.best_value,
                slack: -r.best_value,
                violated: r.best_value > 0.0,
                evaluations: r.evaluations,
                history,
            })?;
            (json, csv)
        }
    };
    emit(&args.output, &json, &csv)
}

pub fn streams(args: &StreamsArgs) -> CliResult<()> {
    let seed = config::resolve_seed(args.generate.seed);
    let (set, count) = generate_streams(&args.generate, seed)?;
    let text = streamfile::render(&set);
    match &args.out {
        Some(path) => {
            write_atomic(path, &text)?;
            println!("streams: {count}");
        }
        None => {
            print!("{text}");
            eprintln!("streams: {count}");
        }
    }
    Ok(())
}
