use rand::Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corrcore::{BinaryStream, MatchedStreamSet, Sign};
use crate::error::{BellError, Result};
use crate::rng::{domain, Substreams};

/// Random telegraph wave: a fair ±1 start that flips at the points of a
/// Poisson process of rate `switching_rate`. Stationary, with correlation
/// `exp(−2·rate·|Δx|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TelegraphProcess {
    pub switching_rate: f64,
}

impl TelegraphProcess {
    pub fn new(switching_rate: f64) -> Result<Self> {
        if !(switching_rate > 0.0 && switching_rate.is_finite()) {
            return Err(BellError::Config(format!(
                "switching rate must be positive, got {switching_rate}"
            )));
        }
        Ok(Self { switching_rate })
    }

    pub fn correlation(&self, lag: f64) -> f64 {
        (-2.0 * self.switching_rate * lag.abs()).exp()
    }
}

/// Samples `n` realisations at strictly increasing `positions`; stream `k`
/// is labelled `x{k}` and holds the value at `positions[k]`.
pub fn sample_telegraph(
    process: &TelegraphProcess,
    positions: &[f64],
    n: usize,
    seed: u64,
) -> Result<MatchedStreamSet> {
    if n == 0 {
        return Err(BellError::Usage(
            "realisation count must be at least 1".into(),
        ));
    }
    if positions.is_empty() {
        return Err(BellError::Usage("at least one position is required".into()));
    }
    if positions.iter().any(|x| !x.is_finite()) || positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BellError::Usage(
            "positions must be finite and strictly increasing".into(),
        ));
    }
    let gaps = Exp::new(process.switching_rate)
        .map_err(|e| BellError::Config(format!("switching rate: {e}")))?;
    let subs = Substreams::new(seed, domain::TELEGRAPH, 0);
    let start = positions[0];

    let rows: Vec<Vec<Sign>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = subs.trial(i);
            let mut value = if rng.random_bool(0.5) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let mut next_flip = start + gaps.sample(&mut rng);
            positions
                .iter()
                .map(|&x| {
                    while next_flip <= x {
                        value = -value;
                        next_flip += gaps.sample(&mut rng);
                    }
                    value
                })
                .collect()
        })
        .collect();

    let members = (0..positions.len())
        .map(|k| {
            let column = rows.iter().map(|r| r[k]).collect();
            Ok((format!("x{k}"), BinaryStream::new(column)?))
        })
        .collect::<Result<Vec<_>>>()?;
    MatchedStreamSet::new(members)
}
