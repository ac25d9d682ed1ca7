//! Perfect matchings in binomial random k-uniform hypergraphs under
//! co-degree-preserving edge deletions.
//!
//! The crate is organised around the constructive route from a hypergraph to
//! a perfect matching:
//!
//! 1. [`hypergraph`]: k-uniform hypergraphs with an eager co-degree index,
//!    k-partite restriction, matching verification and exhaustive oracles.
//! 2. [`randgen`]: seeded sampling of `H^k_{n,p}` and balanced partitions,
//!    plus the partition and co-degree concentration checks.
//! 3. [`adversary`]: the parity obstruction and a greedy budget adversary.
//! 4. [`reduction`]: the auxiliary bipartite graph `B_pi`, Hopcroft-Karp,
//!    Hall certificates, pseudorandomness and the end-to-end pipeline.
//! 5. [`concentration`]: Chernoff / binomial / McDiarmid bound evaluators and
//!    exact or sampled statistics of `d_{B_pi}(v)` over a random permutation.
//! 6. [`experiment`]: deterministic Monte Carlo trials with CSV/JSON output.
//!
//! Vertex ids are 0-based everywhere, including the text file formats.

pub mod adversary;
pub mod concentration;
pub mod experiment;
pub mod hypergraph;
pub mod partition;
pub mod randgen;
pub mod reduction;

pub use adversary::{greedy_budget_adversary, parity_adversary, AdversaryOutcome, AdversarySpec};
pub use hypergraph::{
    brute_force_pm, count_pms, verify_perfect_matching, HyperMatching, Hypergraph,
    HypergraphError, MatchingVerdict, OracleRefusal, PartiteHypergraph, Vertex,
};
pub use partition::{BalancedPartition, PartitionError};
pub use randgen::{sample_balanced_partition, sample_hypergraph, RngSeed};
pub use reduction::{
    build_b_pi, find_good_pi, hall_certificate, is_pseudorandom, max_matching, pipeline_find_pm,
    translate_matching, BipartiteGraph, BipartiteMatching, HallCertificate, PermutationFamily,
    PipelineConfig, PipelineOutcome, PiStrategy,
};
