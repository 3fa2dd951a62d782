//! Sources of correlated ±1 data.

pub mod function;
pub mod lhv;
pub mod singlet;
pub mod telegraph;

pub use function::{eval_correlation_function, CorrelationFunction, Table};
pub use lhv::{
    generate_matched_streams, generate_unmatched_runs, lhv_readout, LambdaLaw, LhvModel, Probe,
    Side, Source,
};
pub use singlet::{sample_singlet_pair, singlet_correlation};
pub use telegraph::{sample_telegraph, TelegraphProcess};
