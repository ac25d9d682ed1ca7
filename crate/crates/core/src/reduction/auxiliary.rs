//! Permutation families, `B_pi`, the search for a matchable `B_pi`, and the
//! translation of its perfect matchings back to the hypergraph.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::bipartite::{alternating_certificate, max_matching, BipartiteGraph, BipartiteMatching, HallCertificate, Side};
use super::ReductionError;
use crate::hypergraph::{HyperMatching, PartiteHypergraph, Vertex};
use crate::partition::BalancedPartition;
use crate::randgen::RngSeed;

/// `maps[j][i] = pi_{j+1}(i)`, a vertex of part `j` (0-based), for the first
/// `k - 1` parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationFamily {
    maps: Vec<Vec<Vertex>>,
}

impl PermutationFamily {
    /// Checked against `partition`: one bijection onto each of parts `0..k-1`.
    pub fn new(maps: Vec<Vec<Vertex>>, partition: &BalancedPartition) -> Result<Self, ReductionError> {
        let family = Self { maps };
        family.validate(partition)?;
        Ok(family)
    }

    /// `pi_j(i) = V_j[i]` (parts ascending) for every `j`.
    pub fn identity(partition: &BalancedPartition) -> Self {
        let k = partition.num_parts();
        Self { maps: (0..k - 1).map(|j| partition.part(j).to_vec()).collect() }
    }

    /// Random `pi_1`, identities elsewhere.
    pub fn random_first(partition: &BalancedPartition, seed: RngSeed) -> Self {
        let mut family = Self::identity(partition);
        family.maps[0].shuffle(&mut seed.rng());
        family
    }

    /// Every `pi_j` uniform and independent.
    pub fn random_all(partition: &BalancedPartition, seed: RngSeed) -> Self {
        let mut family = Self::identity(partition);
        let mut rng = seed.rng();
        for map in &mut family.maps {
            map.shuffle(&mut rng);
        }
        family
    }

    pub fn maps(&self) -> &[Vec<Vertex>] {
        &self.maps
    }

    pub fn m(&self) -> usize {
        self.maps.first().map_or(0, Vec::len)
    }

    /// Row `i` of `X_pi`, ascending.
    pub fn row(&self, i: usize) -> Vec<Vertex> {
        let mut row: Vec<Vertex> = self.maps.iter().map(|map| map[i]).collect();
        row.sort_unstable();
        row
    }

    pub fn validate(&self, partition: &BalancedPartition) -> Result<(), ReductionError> {
        let k = partition.num_parts();
        if self.maps.len() + 1 != k {
            return Err(ReductionError::PermutationCount { got: self.maps.len(), expected: k - 1 });
        }
        let m = partition.part_size();
        for (j, map) in self.maps.iter().enumerate() {
            let bad = |reason: String| ReductionError::NotBijective { index: j, reason };
            if map.len() != m {
                return Err(bad(format!("has {} entries, part size is {m}", map.len())));
            }
            let mut sorted = map.clone();
            sorted.sort_unstable();
            if sorted != partition.part(j) {
                return Err(bad("image differs from the part".into()));
            }
        }
        Ok(())
    }
}

/// `B_pi(H')`: row `i` is adjacent to position `t` of `V_k` iff
/// `{pi_1(i), ..., pi_{k-1}(i), V_k[t]}` is an edge of `H'`.
pub fn build_b_pi(hp: &PartiteHypergraph, pi: &PermutationFamily) -> Result<BipartiteGraph, ReductionError> {
    let partition = hp.partition();
    pi.validate(partition)?;
    let m = partition.part_size();
    let h = hp.hypergraph();
    let adjacency = (0..m)
        .map(|i| {
            // Transversal edges through a row of parts 0..k-1 end in V_k.
            let mut list: Vec<usize> = h.completions(&pi.row(i)).iter().map(|&v| partition.index_in_part(v)).collect();
            list.sort_unstable();
            list
        })
        .collect();
    Ok(BipartiteGraph::from_sorted(m, adjacency))
}

/// `{ {pi_1(i), ..., pi_{k-1}(i), V_k[M(i)]} : i ∈ [m] }`.
pub fn translate_matching(
    hp: &PartiteHypergraph,
    pi: &PermutationFamily,
    matching: &BipartiteMatching,
) -> Result<HyperMatching, ReductionError> {
    let partition = hp.partition();
    pi.validate(partition)?;
    let m = partition.part_size();
    let last = partition.part(partition.num_parts() - 1);
    let size = matching.size();
    if !matching.is_perfect() || size != m {
        return Err(ReductionError::NotPerfect { size, m });
    }
    Ok(HyperMatching::new(matching.pairs().map(|(i, t)| {
        let mut e = pi.row(i);
        e.push(last[t]);
        e
    })))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PiStrategy {
    /// Random `pi_1`, identity elsewhere.
    #[default]
    Pi1Only,
    /// All `k - 1` permutations random.
    FullRandom,
    /// `Pi1Only` for the first half of the budget (rounded up), then `FullRandom`.
    Fallback,
}

impl PiStrategy {
    fn for_attempt(self, attempt: usize, budget: usize) -> Self {
        match self {
            Self::Fallback if attempt < budget.div_ceil(2) => Self::Pi1Only,
            Self::Fallback => Self::FullRandom,
            s => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiSuccess {
    pub pi: PermutationFamily,
    pub matching: BipartiteMatching,
    /// 1-based index of the successful attempt.
    pub attempts: usize,
    pub strategy_used: PiStrategy,
    pub min_degree: usize,
    /// `(1/2 + eps/2) m p`.
    pub degree_target: f64,
}

impl PiSuccess {
    pub fn meets_degree_target(&self) -> bool {
        self.min_degree as f64 >= self.degree_target
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiFailure {
    pub attempts: usize,
    pub certificate: HallCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PiSearchOutcome {
    Found(PiSuccess),
    Exhausted(PiFailure),
}

/// Tries up to `budget` permutation families and returns the first whose
/// `B_pi` has a perfect matching. Attempt `a` draws from `seed.derive(a)`, so
/// attempts are independent and the lowest successful index wins however
/// they are scheduled.
pub fn find_good_pi(
    hp: &PartiteHypergraph,
    eps: f64,
    p: f64,
    budget: usize,
    seed: RngSeed,
    strategy: PiStrategy,
) -> Result<PiSearchOutcome, ReductionError> {
    if budget == 0 {
        return Err(ReductionError::ZeroBudget);
    }
    let partition = hp.partition();
    let m = partition.part_size();
    let mut last = None;
    for attempt in 0..budget {
        let chosen = strategy.for_attempt(attempt, budget);
        let attempt_seed = seed.derive(attempt as u64);
        let pi = match chosen {
            PiStrategy::FullRandom => PermutationFamily::random_all(partition, attempt_seed),
            _ => PermutationFamily::random_first(partition, attempt_seed),
        };
        let b = build_b_pi(hp, &pi)?;
        let matching = max_matching(&b);
        if matching.is_perfect() {
            return Ok(PiSearchOutcome::Found(PiSuccess {
                pi,
                matching,
                attempts: attempt + 1,
                strategy_used: chosen,
                min_degree: b.min_degree(),
                degree_target: (0.5 + eps / 2.0) * m as f64 * p,
            }));
        }
        last = Some((b, matching));
    }
    let (b, matching) = last.expect("budget >= 1");
    Ok(PiSearchOutcome::Exhausted(PiFailure {
        attempts: budget,
        certificate: alternating_certificate(&b, &matching, Side::Left),
    }))
}
