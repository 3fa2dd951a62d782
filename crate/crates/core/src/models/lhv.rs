//! Local (and optionally nonlocal) hidden-variable models and the two
//! acquisition schemes built on them.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::singlet::sample_singlet_pair;
use crate::corrcore::{BinaryStream, MatchedStreamSet, Sign};
use crate::error::{BellError, Result};
use crate::rng::{domain, Substreams, TrialRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// A measurement to record: which side, at which angle, and for a nonlocal
/// B-side readout the remote A setting it depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    pub side: Side,
    pub angle: f64,
    pub remote: Option<f64>,
}

impl Probe {
    pub fn a(angle: f64) -> Self {
        Self {
            side: Side::A,
            angle,
            remote: None,
        }
    }

    pub fn b(angle: f64) -> Self {
        Self {
            side: Side::B,
            angle,
            remote: None,
        }
    }

    /// B-side probe whose readout may depend on the A setting `remote`.
    pub fn b_given(angle: f64, remote: f64) -> Self {
        Self {
            side: Side::B,
            angle,
            remote: Some(remote),
        }
    }
}

pub type Readout = Arc<dyn Fn(f64, f64) -> Sign + Send + Sync>;
pub type NonlocalReadout = Arc<dyn Fn(f64, f64, f64) -> Sign + Send + Sync>;

/// Distribution of the hidden variable λ.
#[derive(Clone)]
pub enum LambdaLaw {
    /// Uniform angle on [0, 2π).
    UniformAngle,
    Custom(Arc<dyn Fn(&mut TrialRng) -> f64 + Send + Sync>),
}

impl LambdaLaw {
    pub fn draw(&self, rng: &mut TrialRng) -> f64 {
        match self {
            LambdaLaw::UniformAngle => rng.random::<f64>() * TAU,
            LambdaLaw::Custom(f) => f(rng),
        }
    }
}

/// Hidden-variable distribution plus deterministic readouts.
///
/// `readout_a(setting, λ)` and `readout_b(setting, λ)` are local. When
/// `nonlocal_b` is present it is consulted as `nonlocal_b(b, a, λ)` for any
/// B-side probe that names its remote A setting.
#[derive(Clone)]
pub struct LhvModel {
    pub name: String,
    pub lambda_law: LambdaLaw,
    pub readout_a: Readout,
    pub readout_b: Readout,
    pub nonlocal_b: Option<NonlocalReadout>,
}

impl fmt::Debug for LhvModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LhvModel")
            .field("name", &self.name)
            .field("nonlocal", &self.nonlocal_b.is_some())
            .finish()
    }
}

impl LhvModel {
    /// `A(a, λ) = sign cos(λ − a)`, `B(b, λ) = −sign cos(λ − b)` with λ
    /// uniform on the circle. Pair correlation `−1 + 2|b − a|/π`.
    pub fn bell_linear() -> Self {
        Self {
            name: "bell-linear".into(),
            lambda_law: LambdaLaw::UniformAngle,
            readout_a: Arc::new(|a, lambda| Sign::of((lambda - a).cos())),
            readout_b: Arc::new(|b, lambda| -Sign::of((lambda - b).cos())),
            nonlocal_b: None,
        }
    }

    /// The linear model plus a B readout that leans on the A setting:
    /// `B(b, a, λ) = −sign cos(λ − b + a/2)`.
    pub fn nonlocal_toy() -> Self {
        Self {
            name: "nonlocal-toy".into(),
            nonlocal_b: Some(Arc::new(|b, a, lambda| {
                -Sign::of((lambda - b + a / 2.0).cos())
            })),
            ..Self::bell_linear()
        }
    }

    pub fn is_local(&self) -> bool {
        self.nonlocal_b.is_none()
    }

    fn check_probe(&self, probe: &Probe) -> Result<()> {
        match (probe.side, probe.remote) {
            (Side::A, Some(_)) => Err(BellError::Usage(
                "a remote setting only applies to B-side readouts".into(),
            )),
            (Side::B, Some(_)) if self.nonlocal_b.is_none() => Err(BellError::Usage(format!(
                "model `{}` is local; it takes no remote setting",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    #[inline]
    fn read(&self, probe: &Probe, lambda: f64) -> Sign {
        match (probe.side, probe.remote, &self.nonlocal_b) {
            (Side::A, _, _) => (self.readout_a)(probe.angle, lambda),
            (Side::B, Some(remote), Some(nl)) => nl(probe.angle, remote, lambda),
            (Side::B, _, _) => (self.readout_b)(probe.angle, lambda),
        }
    }
}

/// Deterministic readout of one side.
///
/// A nonlocal model read without a remote setting falls back to its local
/// B readout.
pub fn lhv_readout(
    model: &LhvModel,
    side: Side,
    setting: f64,
    lambda: f64,
    remote_setting: Option<f64>,
) -> Result<Sign> {
    let probe = Probe {
        side,
        angle: setting,
        remote: remote_setting,
    };
    model.check_probe(&probe)?;
    Ok(model.read(&probe, lambda))
}

/// Counterfactual (matched) acquisition: one λ per trial, shared by every
/// probe.
pub fn generate_matched_streams<S: AsRef<str>>(
    model: &LhvModel,
    settings: &[(S, Probe)],
    n: usize,
    seed: u64,
) -> Result<MatchedStreamSet> {
    if n == 0 {
        return Err(BellError::Usage("trial count must be at least 1".into()));
    }
    if settings.is_empty() {
        return Err(BellError::Usage("at least one setting is required".into()));
    }
    for (_, p) in settings {
        model.check_probe(p)?;
    }
    let subs = Substreams::new(seed, domain::MATCHED, 0);
    let lambdas: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| model.lambda_law.draw(&mut subs.trial(i)))
        .collect();
    let members = settings
        .iter()
        .map(|(label, probe)| {
            let values = lambdas.par_iter().map(|&l| model.read(probe, l)).collect();
            Ok((label.as_ref().to_string(), BinaryStream::new(values)?))
        })
        .collect::<Result<Vec<_>>>()?;
    MatchedStreamSet::new(members)
}

/// Where unmatched runs come from.
#[derive(Debug, Clone)]
pub enum Source {
    Singlet,
    Lhv(LhvModel),
}

impl Source {
    pub fn name(&self) -> &str {
        match self {
            Source::Singlet => "singlet",
            Source::Lhv(m) => &m.name,
        }
    }
}

/// Independent-run acquisition: each setting pair gets its own fresh
/// `n_per_run` trials; no trial is shared between runs.
///
/// The singlet sampler only knows A–B joint statistics, so a same-side pair
/// is refused.
pub fn generate_unmatched_runs(
    source: &Source,
    setting_pairs: &[(Probe, Probe)],
    n_per_run: usize,
    seed: u64,
) -> Result<Vec<(BinaryStream, BinaryStream)>> {
    if n_per_run == 0 {
        return Err(BellError::Usage("trial count must be at least 1".into()));
    }
    for (p, q) in setting_pairs {
        match source {
            Source::Singlet => {
                if p.side == q.side {
                    return Err(BellError::Unsupported(format!(
                        "the singlet state assigns no joint statistics to two {:?}-side settings; \
                         same-side spin observables do not commute",
                        p.side
                    )));
                }
                if p.remote.is_some() || q.remote.is_some() {
                    return Err(BellError::Usage(
                        "the singlet sampler takes no remote settings".into(),
                    ));
                }
            }
            Source::Lhv(m) => {
                m.check_probe(p)?;
                m.check_probe(q)?;
            }
        }
    }

    setting_pairs
        .iter()
        .enumerate()
        .map(|(run, (p, q))| {
            let subs = Substreams::new(seed, domain::UNMATCHED, run as u64);
            let pairs: Vec<(Sign, Sign)> = (0..n_per_run as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = subs.trial(i);
                    match source {
                        Source::Singlet => {
                            let (a, b) = if p.side == Side::A { (p, q) } else { (q, p) };
                            let (s, t) = sample_singlet_pair(a.angle, b.angle, &mut rng);
                            if p.side == Side::A {
                                (s, t)
                            } else {
                                (t, s)
                            }
                        }
                        Source::Lhv(m) => {
                            let lambda = m.lambda_law.draw(&mut rng);
                            (m.read(p, lambda), m.read(q, lambda))
                        }
                    }
                })
                .collect();
            let (x, y): (Vec<Sign>, Vec<Sign>) = pairs.into_iter().unzip();
            Ok((BinaryStream::new(x)?, BinaryStream::new(y)?))
        })
        .collect()
}
