use serde::Serialize;

use super::stream::BinaryStream;
use crate::error::{BellError, Result};

/// A correlation between two streams of common length.
///
/// `sum` is the exact integer Σ x_i·y_i; `value` is `sum / n` and `stderr`
/// is `sqrt((1 - value²) / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub value: f64,
    pub n: u64,
    pub sum: i64,
    pub stderr: f64,
}

impl CorrelationEstimate {
    pub fn from_sum(sum: i64, n: u64) -> Self {
        debug_assert!(n > 0 && sum.unsigned_abs() <= n);
        debug_assert_eq!(
            (sum - n as i64).rem_euclid(2),
            0,
            "parity of sum must match n"
        );
        let value = sum as f64 / n as f64;
        let stderr = ((1.0 - value * value).max(0.0) / n as f64).sqrt();
        Self {
            value,
            n,
            sum,
            stderr,
        }
    }
}

/// Exact correlation of two equal-length streams.
pub fn correlate(x: &BinaryStream, y: &BinaryStream) -> Result<CorrelationEstimate> {
    Ok(CorrelationEstimate::from_sum(
        product_sum(x, y)?,
        x.len() as u64,
    ))
}

/// Σ x_i·y_i, counted as agreements minus disagreements.
pub(crate) fn product_sum(x: &BinaryStream, y: &BinaryStream) -> Result<i64> {
    if x.len() != y.len() {
        return Err(BellError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let disagree = x
        .as_slice()
        .iter()
        .zip(y.as_slice())
        .filter(|(a, b)| a != b)
        .count() as i64;
    Ok(x.len() as i64 - 2 * disagree)
}
