use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants are grouped by who is at fault: malformed data (`Length*`,
/// `InvalidOutcome`, `EmptyStream`, `Parse`), out-of-range arguments
/// (`Domain`, `Range`), and protocol misuse (`Usage`, `Config`, `Unsupported`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellError {
    #[error("stream length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("stream must contain at least one outcome")]
    EmptyStream,

    #[error("invalid outcome {0}: every entry must be +1 or -1")]
    InvalidOutcome(i64),

    #[error("duplicate stream label `{0}`")]
    DuplicateLabel(String),

    #[error("value {value} for `{name}` lies outside [-1, 1]")]
    Domain { name: &'static str, value: f64 },

    #[error("difference {value} lies outside the tabulated range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("conditioning event was never observed in {draws} draws")]
    NoSupport { draws: u64 },

    #[error("internal invariant breached: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = BellError> = std::result::Result<T, E>;
