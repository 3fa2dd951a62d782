//! Turns command-line text into core types and records the effective
//! configuration for the report.

use std::path::Path;

use bell_core::analysis::ScanGrid;
use bell_core::models::{CorrelationFunction, LhvModel, Source, Table};
use serde::Serialize;

use crate::args::{AcquisitionArg, Format, GenerateArgs, Locality, Objective};
use crate::error::{CliError, CliResult};

/// Effective configuration, echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub angles_deg: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acquisition: Option<AcquisitionArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locality: Option<Locality>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<Objective>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &'static str, format: Format) -> Self {
        Self {
            command,
            model: None,
            angles_deg: Vec::new(),
            trials: None,
            seed: None,
            acquisition: None,
            locality: None,
            objective: None,
            grid: None,
            input: None,
            format,
        }
    }

    pub fn with_generation(mut self, g: &GenerateArgs, seed: u64) -> CliResult<Self> {
        self.model = Some(g.model.clone());
        self.angles_deg = parse_angles(&g.angles)?.into_iter().map(round6).collect();
        self.trials = Some(g.trials);
        self.seed = Some(seed);
        self.locality = Some(g.locality);
        Ok(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridEcho {
    /// "degrees" for angular functions, "raw" otherwise.
    pub units: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub refinement_rounds: usize,
    pub refinement_shrink: f64,
    pub resolution: f64,
}

/// Rounds to six decimal places, the precision used for every serialised
/// angle. Negative zero is normalised.
pub fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn deg6(radians: f64) -> f64 {
    round6(radians.to_degrees())
}

pub fn parse_angles(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("`{t}` is not an angle in degrees")))
        })
        .collect()
}

/// Splits `a,b,b'` or `a,a',b,b'` (degrees) into A and B settings in radians.
pub fn split_settings(angles_deg: &[f64]) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let rad: Vec<f64> = angles_deg.iter().map(|d| d.to_radians()).collect();
    match rad.len() {
        3 => Ok((rad[..1].to_vec(), rad[1..].to_vec())),
        4 => Ok((rad[..2].to_vec(), rad[2..].to_vec())),
        n => Err(CliError::Usage(format!(
            "--angles needs 3 values (a,b,b') or 4 values (a,a',b,b'), got {n}"
        ))),
    }
}

pub fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s: u64 = rand::random();
        eprintln!("no --seed given; using seed {s}");
        s
    })
}

pub fn hidden_variable_model(name: &str) -> CliResult<LhvModel> {
    match name {
        "bell-linear" => Ok(LhvModel::bell_linear()),
        "nonlocal-toy" => Ok(LhvModel::nonlocal_toy()),
        other => Err(CliError::Usage(format!(
            "unknown hidden-variable model `{other}` (expected bell-linear or nonlocal-toy)"
        ))),
    }
}

pub fn source(name: &str) -> CliResult<Source> {
    match name {
        "singlet" => Ok(Source::Singlet),
        other => hidden_variable_model(other).map(Source::Lhv),
    }
}

pub fn correlation_function(spec: &str) -> CliResult<CorrelationFunction> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    match (kind, arg) {
        ("cosine", None) => Ok(CorrelationFunction::Cosine),
        ("neg-cosine", None) => Ok(CorrelationFunction::NegCosine),
        ("bell-linear", None) => Ok(CorrelationFunction::BellLinear),
        ("exponential", Some(len)) => {
            let len: f64 = len
                .parse()
                .map_err(|_| CliError::Usage(format!("bad correlation length `{len}`")))?;
            Ok(CorrelationFunction::exponential(len)?)
        }
        ("tabulated", Some(path)) => read_table(Path::new(path)),
        _ => Err(CliError::Usage(format!(
            "unknown correlation function `{spec}` (expected cosine, neg-cosine, bell-linear, \
             exponential:<length> or tabulated:<file>)"
        ))),
    }
}

/// Two columns per line, difference then value; `#` starts a comment.
fn read_table(path: &Path) -> CliResult<CorrelationFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                CliError::Data(format!("{}:{}: not a number pair", path.display(), i + 1))
            })?;
        if nums.len() != 2 {
            return Err(CliError::Data(format!(
                "{}:{}: expected two columns",
                path.display(),
                i + 1
            )));
        }
        points.push((nums[0], nums[1]));
    }
    let table = Table::new(points).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(CorrelationFunction::Tabulated(table))
}

/// Grid in internal units (radians for angular functions) plus its echo.
pub fn scan_grid(
    f: &CorrelationFunction,
    objective: Objective,
    grid: Option<&str>,
    refine: &str,
) -> CliResult<(ScanGrid, GridEcho)> {
    let angular = f.is_angular();
    let (lo, hi, steps) = match grid {
        Some(text) => {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(CliError::Usage(format!(
                    "--grid expects lo:hi:steps, got `{text}`"
                )));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad grid bound `{s}`")))
            };
            let steps = parts[2]
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad grid step count `{}`", parts[2])))?;
            (num(parts[0])?, num(parts[1])?, steps)
        }
        None => match (objective, angular, f.domain()) {
            (Objective::Wss, true, _) => (0.0, 180.0, ScanGrid::DEFAULT_STEPS),
            (_, true, _) => (-180.0, 180.0, ScanGrid::DEFAULT_STEPS),
            (Objective::Wss, false, Some((_, hi))) if hi > 0.0 => {
                (0.0, hi, ScanGrid::DEFAULT_STEPS)
            }
            (_, false, Some((lo, hi))) => {
                let half = lo.abs().min(hi.abs()) / 2.0;
                (-half, half, ScanGrid::DEFAULT_STEPS)
            }
            (_, false, None) => (0.0, 3.0, ScanGrid::DEFAULT_STEPS),
        },
    };
    let (rounds, shrink) = refine
        .split_once(':')
        .and_then(|(r, s)| {
            Some((
                r.trim().parse::<usize>().ok()?,
                s.trim().parse::<f64>().ok()?,
            ))
        })
        .ok_or_else(|| {
            CliError::Usage(format!("--refine expects rounds:shrink, got `{refine}`"))
        })?;
    let to_internal = |x: f64| if angular { x.to_radians() } else { x };
    let g = ScanGrid::with_refinement(to_internal(lo), to_internal(hi), steps, rounds, shrink)?;
    let echo = GridEcho {
        units: if angular { "degrees" } else { "raw" },
        lo,
        hi,
        steps,
        refinement_rounds: rounds,
        refinement_shrink: shrink,
        resolution: if angular {
            round6((hi - lo) / (steps - 1) as f64)
        } else {
            g.resolution()
        },
    };
    Ok((g, echo))
}
