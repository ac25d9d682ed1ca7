//! From a hypergraph to a perfect matching through an auxiliary bipartite
//! graph.
//!
//! Given a balanced partition `V_1, ..., V_k` with induced k-partite
//! subhypergraph `H'`, a family of bijections `pi_j : [m] -> V_j` for
//! `j < k` defines rows `x_i = {pi_1(i), ..., pi_{k-1}(i)}`. The graph `B_pi`
//! joins row `i` to `v ∈ V_k` iff `x_i + {v}` is an edge of `H'`, and every
//! perfect matching of `B_pi` is a perfect matching of `H'` (and of `H`).

mod auxiliary;
mod bipartite;
mod pipeline;
mod pseudorandom;

use thiserror::Error;

use crate::hypergraph::HypergraphError;
use crate::partition::PartitionError;

pub use auxiliary::{
    build_b_pi, find_good_pi, translate_matching, PermutationFamily, PiFailure, PiSearchOutcome, PiStrategy,
    PiSuccess,
};
pub use bipartite::{
    hall_certificate, hall_certificate_on, max_matching, BipartiteGraph, BipartiteMatching, HallCertificate, Side,
};
pub use pipeline::{
    partition_alpha, pipeline_find_pm, FailureReport, FailureStage, PipelineConfig, PipelineOutcome,
    PipelineSuccess,
};
pub use pseudorandom::{is_pseudorandom, CheckMode, PseudorandomVerdict, PseudorandomWitness, EXACT_MAX_M};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("adjacency has {got} rows, expected {expected}")]
    RowCount { got: usize, expected: usize },
    #[error("row {row} lists neighbour {neighbor} outside [0, {m})")]
    NeighborOutOfRange { row: usize, neighbor: usize, m: usize },
    #[error("graph has a perfect matching, so no Hall violator exists")]
    HasPerfectMatching,
    #[error("permutation {index} is not a bijection onto part {index}: {reason}")]
    NotBijective { index: usize, reason: String },
    #[error("expected {expected} permutations, got {got}")]
    PermutationCount { got: usize, expected: usize },
    #[error("matching covers {size} of {m} rows")]
    NotPerfect { size: usize, m: usize },
    #[error("retry budget must be at least 1")]
    ZeroBudget,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}
