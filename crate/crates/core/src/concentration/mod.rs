//! Tail bounds and the law of a single vertex degree in `B_pi`.

mod bounds;
mod extension;

use thiserror::Error;

pub use bounds::{
    binomial_tail_bound, binomial_tail_bound_checked, binomial_upper_tail, chernoff_bounds, mcdiarmid_bound, Bound,
    CheckedTail, ChernoffTails, SELF_TEST_MAX_TRIALS,
};
pub use extension::{
    extension_stats_empirical, extension_stats_exact, ExactMoments, ExtensionMatrix, ExtensionStats, Moments,
    StatsMode, EMPIRICAL_BATCH, EXACT_MAX_M,
};

#[derive(Debug, Error)]
pub enum ConcentrationError {
    #[error("{0}")]
    Domain(String),
    #[error("bound {bound} is below the exact tail {exact}")]
    BoundViolated { bound: f64, exact: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}
