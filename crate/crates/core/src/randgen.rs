//! Seeded randomness: `H^k_{n,p}`, uniform equipartitions, and the checks
//! that a partition splits co-degrees evenly and that co-degrees concentrate.
//!
//! All randomness comes from [`RngSeed::rng`], a ChaCha8 stream keyed by a
//! 64-bit seed. Independent sub-streams are derived with [`mix`], so the
//! output of every function here depends only on its arguments.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{check_shape, Hypergraph, HypergraphError, Vertex};
use crate::partition::{BalancedPartition, PartitionError};

/// Stream labels used with [`RngSeed::derive`].
pub mod streams {
    pub const SAMPLE: u64 = 0x5341_4d50;
    pub const ADVERSARY: u64 = 0x4144_5653;
    pub const PARTITION: u64 = 0x5041_5254;
    pub const PI_SEARCH: u64 = 0x5049_5352;
    pub const PIPELINE: u64 = 0x5049_5045;
    pub const PSEUDORANDOM: u64 = 0x5053_5244;
    pub const EXTENSION: u64 = 0x4558_544e;
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output finalizer.
pub fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `mix(seed, label) = finalize(seed ^ finalize(label + GOLDEN_GAMMA))`.
pub fn mix(seed: u64, label: u64) -> u64 {
    finalize(seed ^ finalize(label.wrapping_add(GOLDEN_GAMMA)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn derive(self, label: u64) -> Self {
        Self(mix(self.0, label))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        Self(seed)
    }
}

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("edge probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// One coin per k-subset in lexicographic order.
    #[default]
    Enumerate,
    /// Draw the edge count from `Bin(C(n,k), p)`, then that many distinct
    /// uniform k-subsets by rejection. Same law, cheaper for small `p`.
    Sparse,
}

/// Samples `H^k_{n,p}` by full enumeration.
pub fn sample_hypergraph(n: usize, k: usize, p: f64, seed: RngSeed) -> Result<Hypergraph, SamplingError> {
    sample_hypergraph_with(n, k, p, seed, SamplingMode::Enumerate)
}

pub fn sample_hypergraph_with(
    n: usize,
    k: usize,
    p: f64,
    seed: RngSeed,
    mode: SamplingMode,
) -> Result<Hypergraph, SamplingError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SamplingError::Probability(p));
    }
    check_shape(n, k)?;
    let mut rng = seed.rng();
    let edges: Vec<Vec<Vertex>> = match mode {
        SamplingMode::Enumerate => (0..n).combinations(k).filter(|_| rng.gen::<f64>() < p).collect(),
        SamplingMode::Sparse => {
            let total = binomial_coefficient(n as u64, k as u64);
            let count = Binomial::new(total, p).expect("p checked above").sample(&mut rng);
            let mut picked = std::collections::BTreeSet::new();
            let mut buf: Vec<Vertex> = Vec::with_capacity(k);
            while (picked.len() as u64) < count {
                buf.clear();
                buf.extend(rand::seq::index::sample(&mut rng, n, k));
                buf.sort_unstable();
                picked.insert(buf.clone());
            }
            picked.into_iter().collect()
        }
    };
    Ok(Hypergraph::from_normalized(n, k, edges))
}

fn binomial_coefficient(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Uniform equipartition: a uniform permutation of `[0, n)` cut into `k`
/// consecutive blocks of size `n / k`.
pub fn sample_balanced_partition(n: usize, k: usize, seed: RngSeed) -> Result<BalancedPartition, PartitionError> {
    if k == 0 {
        return Err(PartitionError::NoParts);
    }
    if !n.is_multiple_of(k) {
        return Err(PartitionError::Indivisible { n, parts: k });
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut seed.rng());
    BalancedPartition::from_order(&order, k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionViolation {
    pub subset: Vec<Vertex>,
    pub part: usize,
    pub within_part: usize,
    pub codegree: usize,
}

/// Result of [`verify_partition`]. `violations` is empty iff
/// `worst_deviation <= alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub alpha: f64,
    pub violations: Vec<PartitionViolation>,
    /// Largest `|d(X, V_i) * k / d(X) - 1|`; 0 when every `d(X)` is 0.
    pub worst_deviation: f64,
    pub checked_subsets: usize,
    /// (k-1)-subsets with `d(X) = 0`, where the relative test is undefined.
    pub skipped_subsets: u64,
}

impl PartitionReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d(X, V_i) ∈ (1 ± alpha) d(X) / k` (inclusive) for every
/// (k-1)-subset with `d(X) > 0` and every part.
pub fn verify_partition(
    h: &Hypergraph,
    partition: &BalancedPartition,
    alpha: f64,
) -> Result<PartitionReport, PartitionError> {
    let k = h.k();
    if partition.num_vertices() != h.n() {
        return Err(PartitionError::SizeMismatch { got: partition.num_vertices(), expected: h.n() });
    }
    if partition.num_parts() != k {
        return Err(PartitionError::PartCountMismatch { got: partition.num_parts(), expected: k });
    }
    let mut violations = Vec::new();
    let mut worst: f64 = 0.0;
    let mut counts = vec![0usize; k];
    for (x, completions) in h.index().iter() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &v in completions {
            counts[partition.part_of(v)] += 1;
        }
        let d = completions.len();
        assert_eq!(counts.iter().sum::<usize>(), d, "parts must split d(X) exactly");
        for (i, &c) in counts.iter().enumerate() {
            let deviation = (c * k).abs_diff(d) as f64 / d as f64;
            worst = worst.max(deviation);
            if deviation > alpha {
                violations.push(PartitionViolation { subset: x.to_vec(), part: i, within_part: c, codegree: d });
            }
        }
    }
    let total = binomial_coefficient(h.n() as u64, (k - 1) as u64);
    Ok(PartitionReport {
        alpha,
        violations,
        worst_deviation: worst,
        checked_subsets: h.index().len(),
        skipped_subsets: total - h.index().len() as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodegreeConcentration {
    pub holds: bool,
    pub min_codegree: usize,
    pub max_codegree: usize,
    pub lower: f64,
    pub upper: f64,
    /// The subset whose co-degree is farthest from `np`.
    pub worst_subset: Vec<Vertex>,
    pub worst_codegree: usize,
}

/// `(1 - eps) np <= δ_{k-1}(H)` and `Δ_{k-1}(H) <= (1 + eps) np`.
pub fn check_codegree_concentration(h: &Hypergraph, p: f64, eps: f64) -> CodegreeConcentration {
    let np = h.n() as f64 * p;
    let (lower, upper) = ((1.0 - eps) * np, (1.0 + eps) * np);
    let mut min = usize::MAX;
    let mut max = 0;
    let mut worst: Option<(f64, Vec<Vertex>, usize)> = None;
    for x in (0..h.n()).combinations(h.k() - 1) {
        let d = h.completions(&x).len();
        min = min.min(d);
        max = max.max(d);
        let gap = (d as f64 - np).abs();
        if worst.as_ref().is_none_or(|(g, _, _)| gap > *g) {
            worst = Some((gap, x, d));
        }
    }
    let (_, worst_subset, worst_codegree) = worst.expect("n >= k gives at least one subset");
    CodegreeConcentration {
        holds: lower <= min as f64 && max as f64 <= upper,
        min_codegree: min,
        max_codegree: max,
        lower,
        upper,
        worst_subset,
        worst_codegree,
    }
}
