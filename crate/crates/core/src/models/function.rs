use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{BellError, Result};
use crate::wrap_angle;

/// A hypothesised correlation as a function of a setting or coordinate
/// difference.
///
/// The first three kinds are angular: the difference is wrapped into
/// [-π, π] before evaluation. `Exponential` and `Tabulated` take a spatial
/// difference as is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorrelationFunction {
    /// `−cos d`, the singlet correlation.
    NegCosine,
    /// `cos d`.
    Cosine,
    /// `−1 + 2|d|/π`, the pair correlation of the sign-readout model.
    BellLinear,
    /// `exp(−|d| / correlation_length)`.
    Exponential { correlation_length: f64 },
    /// Piecewise-linear interpolation of a table; no extrapolation.
    Tabulated(Table),
}

/// Strictly increasing differences with values in [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Table {
    points: Vec<(f64, f64)>,
}

impl Table {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(BellError::Config(
                "a table needs at least two points".into(),
            ));
        }
        for w in points.windows(2) {
            // also rejects NaN
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(w[0].0 < w[1].0) {
                return Err(BellError::Config(format!(
                    "table differences must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(d, v) in &points {
            if !d.is_finite() {
                return Err(BellError::Config(format!("non-finite difference {d}")));
            }
            if !(-1.0..=1.0).contains(&v) {
                return Err(BellError::Domain {
                    name: "table value",
                    value: v,
                });
            }
        }
        Ok(Self { points })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, d: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&d) {
            return Err(BellError::Range { value: d, lo, hi });
        }
        let i = self.points.partition_point(|p| p.0 <= d);
        if i == self.points.len() {
            return Ok(self.points[i - 1].1);
        }
        let (x0, y0) = self.points[i - 1];
        let (x1, y1) = self.points[i];
        Ok(y0 + (y1 - y0) * (d - x0) / (x1 - x0))
    }
}

impl TryFrom<Vec<(f64, f64)>> for Table {
    type Error = BellError;
    fn try_from(points: Vec<(f64, f64)>) -> Result<Self> {
        Table::new(points)
    }
}

impl From<Table> for Vec<(f64, f64)> {
    fn from(t: Table) -> Self {
        t.points
    }
}

impl CorrelationFunction {
    pub fn exponential(correlation_length: f64) -> Result<Self> {
        if !(correlation_length > 0.0 && correlation_length.is_finite()) {
            return Err(BellError::Config(format!(
                "correlation length must be positive, got {correlation_length}"
            )));
        }
        Ok(CorrelationFunction::Exponential { correlation_length })
    }

    pub fn is_angular(&self) -> bool {
        matches!(
            self,
            CorrelationFunction::NegCosine
                | CorrelationFunction::Cosine
                | CorrelationFunction::BellLinear
        )
    }

    /// Range of differences on which the function is defined, if bounded.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            CorrelationFunction::Tabulated(t) => Some(t.range()),
            _ => None,
        }
    }

    /// Errors unless every difference in `[lo, hi]` can be evaluated.
    pub fn check_covers(&self, lo: f64, hi: f64) -> Result<()> {
        match self.domain() {
            Some((dlo, dhi)) if lo < dlo => Err(BellError::Range {
                value: lo,
                lo: dlo,
                hi: dhi,
            }),
            Some((dlo, dhi)) if hi > dhi => Err(BellError::Range {
                value: hi,
                lo: dlo,
                hi: dhi,
            }),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, difference: f64) -> Result<f64> {
        if !difference.is_finite() {
            return Err(BellError::Usage(format!(
                "non-finite difference {difference}"
            )));
        }
        let v = match self {
            CorrelationFunction::NegCosine => -difference.cos(),
            CorrelationFunction::Cosine => difference.cos(),
            CorrelationFunction::BellLinear => -1.0 + 2.0 * wrap_angle(difference).abs() / PI,
            CorrelationFunction::Exponential { correlation_length } => {
                (-difference.abs() / correlation_length).exp()
            }
            CorrelationFunction::Tabulated(t) => t.eval(difference)?,
        };
        Ok(v.clamp(-1.0, 1.0))
    }

    pub fn name(&self) -> &'static str {
        match self {
            CorrelationFunction::NegCosine => "neg-cosine",
            CorrelationFunction::Cosine => "cosine",
            CorrelationFunction::BellLinear => "bell-linear",
            CorrelationFunction::Exponential { .. } => "exponential",
            CorrelationFunction::Tabulated(_) => "tabulated",
        }
    }
}

pub fn eval_correlation_function(f: &CorrelationFunction, difference: f64) -> Result<f64> {
    f.eval(difference)
}
