//! Exact finite-data correlation arithmetic.
//!
//! Correlations are carried as an integer numerator over the stream length,
//! so the identity checks in [`identity`] compare integers and never need a
//! tolerance. Floats appear only in the derived fields of the reports.
//!
//! The four-stream expression is the CHSH combination
//! `|⟨ab⟩ + ⟨ab′⟩| + |⟨a′b⟩ − ⟨a′b′⟩| ≤ 2`.

pub mod bounds;
pub mod correlation;
pub mod identity;
pub mod stream;

pub use bounds::{fourth_correlation_bounds, third_correlation_bounds, FeasibleInterval};
pub use correlation::{correlate, CorrelationEstimate};
pub use identity::{
    bell_identity_four, bell_identity_three, check_inequality_four, check_inequality_three,
    IdentityReport,
};
pub use stream::{BinaryStream, MatchedStreamSet, Sign};

use crate::error::{BellError, Result};

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(BellError::Domain { name, value })
    }
}
