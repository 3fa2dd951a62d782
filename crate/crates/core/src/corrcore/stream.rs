use std::collections::HashSet;
use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{BellError, Result};

/// A single ±1 outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
#[repr(i8)]
pub enum Sign {
    Plus = 1,
    Minus = -1,
}

impl Sign {
    /// Sign of `x` with `sign(0) = +1`.
    #[inline]
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 || x.is_nan() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    #[inline]
    pub fn value(self) -> i64 {
        self as i8 as i64
    }

    pub fn from_int(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(BellError::InvalidOutcome(other)),
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s as i8
    }
}

impl TryFrom<i8> for Sign {
    type Error = BellError;
    fn try_from(v: i8) -> Result<Sign> {
        Sign::from_int(v as i64)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("+1"),
            Sign::Minus => f.write_str("-1"),
        }
    }
}

/// A non-empty, ordered sequence of ±1 outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BinaryStream(Vec<Sign>);

impl BinaryStream {
    pub fn new(values: Vec<Sign>) -> Result<Self> {
        if values.is_empty() {
            return Err(BellError::EmptyStream);
        }
        Ok(Self(values))
    }

    /// Builds a stream from integers, rejecting anything other than ±1.
    pub fn from_ints<I: IntoIterator<Item = i64>>(values: I) -> Result<Self> {
        let signs = values
            .into_iter()
            .map(Sign::from_int)
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    /// The `len` low bits of `mask`, bit set meaning +1. Used by the
    /// exhaustive enumerations.
    pub fn from_mask(mask: u64, len: usize) -> Result<Self> {
        Self::new(
            (0..len)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Sign] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.0.iter().copied()
    }

    pub fn negate(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }

    /// Sum of the outcomes.
    pub fn sum(&self) -> i64 {
        self.0.iter().map(|s| s.value()).sum()
    }
}

/// Streams of a common length that share trial indices: entry `i` of every
/// member was produced from the same hidden-variable realisation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedStreamSet {
    labels: Vec<String>,
    streams: Vec<BinaryStream>,
}

impl MatchedStreamSet {
    pub fn new<S: Into<String>>(members: Vec<(S, BinaryStream)>) -> Result<Self> {
        let mut labels = Vec::with_capacity(members.len());
        let mut streams = Vec::with_capacity(members.len());
        let mut seen = HashSet::new();
        for (label, stream) in members {
            let label = label.into();
            if !seen.insert(label.clone()) {
                return Err(BellError::DuplicateLabel(label));
            }
            if let Some(first) = streams.first() {
                let first: &BinaryStream = first;
                if first.len() != stream.len() {
                    return Err(BellError::LengthMismatch {
                        left: first.len(),
                        right: stream.len(),
                    });
                }
            }
            labels.push(label);
            streams.push(stream);
        }
        Ok(Self { labels, streams })
    }

    /// Number of member streams.
    pub fn count(&self) -> usize {
        self.streams.len()
    }

    /// Common length of the streams; zero for an empty set.
    pub fn trials(&self) -> usize {
        self.streams.first().map_or(0, BinaryStream::len)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn streams(&self) -> &[BinaryStream] {
        &self.streams
    }

    pub fn get(&self, label: &str) -> Option<&BinaryStream> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.streams[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BinaryStream)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.streams.iter())
    }
}
