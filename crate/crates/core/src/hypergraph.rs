//! k-uniform hypergraphs on `[0, n)` with an eager co-degree index.

mod oracle;
mod text;

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{BalancedPartition, PartitionError};

pub use oracle::{brute_force_pm, count_pms, OracleRefusal, BRUTE_FORCE_MAX_VERTICES};

pub type Vertex = usize;

#[derive(Debug, Error)]
pub enum HypergraphError {
    #[error("uniformity k = {0} is below 2")]
    UniformityTooSmall(usize),
    #[error("vertex count n = {n} is smaller than k = {k}")]
    TooFewVertices { n: usize, k: usize },
    #[error("edge {edge:?} has {len} vertices, expected {expected}")]
    WrongArity { edge: Vec<Vertex>, len: usize, expected: usize },
    #[error("vertex {vertex} is outside [0, {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("vertex set {0:?} repeats a vertex")]
    RepeatedVertex(Vec<Vertex>),
    #[error("subset {subset:?} has size {len}, expected {expected}")]
    WrongSubsetSize { subset: Vec<Vertex>, len: usize, expected: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Maps every (k-1)-subset `X` with `d(X) > 0` to the ascending list of
/// vertices `v` such that `X + {v}` is an edge. Absent keys have `d(X) = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CodegreeIndex {
    completions: BTreeMap<Vec<Vertex>, Vec<Vertex>>,
}

impl CodegreeIndex {
    fn build(k: usize, edges: &[Vec<Vertex>]) -> Self {
        let mut completions: BTreeMap<Vec<Vertex>, Vec<Vertex>> = BTreeMap::new();
        let mut key = Vec::with_capacity(k - 1);
        for e in edges {
            for skip in 0..k {
                key.clear();
                key.extend(e.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v));
                completions.entry(key.clone()).or_default().push(e[skip]);
            }
        }
        for list in completions.values_mut() {
            list.sort_unstable();
        }
        Self { completions }
    }

    /// Completions of an ascending (k-1)-tuple.
    pub fn completions(&self, subset: &[Vertex]) -> &[Vertex] {
        self.completions.get(subset).map_or(&[], Vec::as_slice)
    }

    /// Number of (k-1)-subsets with positive co-degree.
    pub fn len(&self) -> usize {
        self.completions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.completions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Vertex], &[Vertex])> {
        self.completions.iter().map(|(x, c)| (x.as_slice(), c.as_slice()))
    }
}

/// A k-uniform hypergraph. Edges are strictly ascending k-tuples kept in
/// lexicographic order without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<Vertex>>,
    index: CodegreeIndex,
}

impl Hypergraph {
    /// Builds a hypergraph from edges in any vertex order; duplicates collapse.
    pub fn new<E>(n: usize, k: usize, edges: impl IntoIterator<Item = E>) -> Result<Self, HypergraphError>
    where
        E: AsRef<[Vertex]>,
    {
        check_shape(n, k)?;
        let mut normalized = Vec::new();
        for e in edges {
            let mut e = e.as_ref().to_vec();
            if e.len() != k {
                return Err(HypergraphError::WrongArity { len: e.len(), edge: e, expected: k });
            }
            if let Some(&vertex) = e.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { vertex, n });
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex(e));
            }
            normalized.push(e);
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self::from_normalized(n, k, normalized))
    }

    /// Edges must already be ascending, in range, sorted and unique.
    pub(crate) fn from_normalized(n: usize, k: usize, edges: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let index = CodegreeIndex::build(k, &edges);
        Self { n, k, edges, index }
    }

    pub fn empty(n: usize, k: usize) -> Result<Self, HypergraphError> {
        check_shape(n, k)?;
        Ok(Self::from_normalized(n, k, Vec::new()))
    }

    /// The complete hypergraph `K_n^(k)`.
    pub fn complete(n: usize, k: usize) -> Result<Self, HypergraphError> {
        check_shape(n, k)?;
        Ok(Self::from_normalized(n, k, (0..n).combinations(k).collect()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index(&self) -> &CodegreeIndex {
        &self.index
    }

    /// Whether the vertex set `e` (any order) is an edge.
    pub fn contains_edge(&self, e: &[Vertex]) -> bool {
        if e.len() != self.k {
            return false;
        }
        let mut e = e.to_vec();
        e.sort_unstable();
        let last = e.pop().expect("k >= 2");
        self.index.completions(&e).binary_search(&last).is_ok()
    }

    /// Ascending completions of an ascending (k-1)-tuple, unchecked.
    pub fn completions(&self, subset: &[Vertex]) -> &[Vertex] {
        self.index.completions(subset)
    }

    /// `d(X)`: the number of edges containing `X`.
    pub fn codegree(&self, subset: &[Vertex]) -> Result<usize, HypergraphError> {
        let x = self.normalize_subset(subset)?;
        Ok(self.index.completions(&x).len())
    }

    /// `d(X, Y) = |{e : X ⊆ e, e \ X ⊆ Y}|`. `Y` may intersect `X`.
    pub fn codegree_into(&self, subset: &[Vertex], targets: &[Vertex]) -> Result<usize, HypergraphError> {
        let x = self.normalize_subset(subset)?;
        let mut in_target = vec![false; self.n];
        for &y in targets {
            if y >= self.n {
                return Err(HypergraphError::VertexOutOfRange { vertex: y, n: self.n });
            }
            in_target[y] = true;
        }
        Ok(self.index.completions(&x).iter().filter(|&&v| in_target[v]).count())
    }

    /// `(δ_{k-1}(H), Δ_{k-1}(H))` over all `C(n, k-1)` subsets, zero-degree ones included.
    pub fn min_max_codegree(&self) -> (usize, usize) {
        let mut min = usize::MAX;
        let mut max = 0;
        for x in (0..self.n).combinations(self.k - 1) {
            let d = self.index.completions(&x).len();
            min = min.min(d);
            max = max.max(d);
        }
        (min, max)
    }

    /// Sum of `d(X)` over all (k-1)-subsets; always `k * |E|`.
    pub fn codegree_sum(&self) -> usize {
        self.index.iter().map(|(_, c)| c.len()).sum()
    }

    /// Keeps the edges meeting every part of `partition` exactly once.
    pub fn induce_kpartite(&self, partition: &BalancedPartition) -> Result<PartiteHypergraph, HypergraphError> {
        if partition.num_vertices() != self.n {
            return Err(PartitionError::SizeMismatch { got: partition.num_vertices(), expected: self.n }.into());
        }
        if partition.num_parts() != self.k {
            return Err(PartitionError::PartCountMismatch { got: partition.num_parts(), expected: self.k }.into());
        }
        let mut seen = vec![false; self.k];
        let edges = self
            .edges
            .iter()
            .filter(|e| {
                seen.iter_mut().for_each(|s| *s = false);
                e.iter().all(|&v| !std::mem::replace(&mut seen[partition.part_of(v)], true))
            })
            .cloned()
            .collect();
        Ok(PartiteHypergraph {
            hypergraph: Self::from_normalized(self.n, self.k, edges),
            partition: partition.clone(),
        })
    }

    /// Edges kept by `keep`, as a new hypergraph on the same vertex set.
    pub fn filter_edges(&self, mut keep: impl FnMut(&[Vertex]) -> bool) -> Self {
        let edges = self.edges.iter().filter(|e| keep(e)).cloned().collect();
        Self::from_normalized(self.n, self.k, edges)
    }

    fn normalize_subset(&self, subset: &[Vertex]) -> Result<Vec<Vertex>, HypergraphError> {
        if subset.len() != self.k - 1 {
            return Err(HypergraphError::WrongSubsetSize {
                subset: subset.to_vec(),
                len: subset.len(),
                expected: self.k - 1,
            });
        }
        if let Some(&vertex) = subset.iter().find(|&&v| v >= self.n) {
            return Err(HypergraphError::VertexOutOfRange { vertex, n: self.n });
        }
        let mut x = subset.to_vec();
        x.sort_unstable();
        if x.windows(2).any(|w| w[0] == w[1]) {
            return Err(HypergraphError::RepeatedVertex(x));
        }
        Ok(x)
    }
}

pub(crate) fn check_shape(n: usize, k: usize) -> Result<(), HypergraphError> {
    if k < 2 {
        return Err(HypergraphError::UniformityTooSmall(k));
    }
    if n < k {
        return Err(HypergraphError::TooFewVertices { n, k });
    }
    Ok(())
}

/// The k-partite subhypergraph `H'` induced by a balanced partition: every
/// edge meets each part exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteHypergraph {
    hypergraph: Hypergraph,
    partition: BalancedPartition,
}

impl PartiteHypergraph {
    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn partition(&self) -> &BalancedPartition {
        &self.partition
    }

    pub fn k(&self) -> usize {
        self.hypergraph.k
    }

    /// `m = n / k`.
    pub fn part_size(&self) -> usize {
        self.partition.part_size()
    }

    /// `δ*_{k-1}(H')`: the least `d(X, V_i)` over all parts `i` and all
    /// transversal (k-1)-tuples `X` of the remaining parts.
    pub fn delta_star(&self) -> usize {
        let k = self.k();
        let mut best = usize::MAX;
        let mut x = Vec::with_capacity(k - 1);
        for i in 0..k {
            let others = (0..k).filter(|&j| j != i).map(|j| self.partition.part(j).iter().copied());
            for tuple in others.multi_cartesian_product() {
                x.clear();
                x.extend_from_slice(&tuple);
                x.sort_unstable();
                // Completions of a transversal of the other parts can only lie in V_i.
                best = best.min(self.hypergraph.completions(&x).len());
                if best == 0 {
                    return 0;
                }
            }
        }
        best
    }
}

/// A set of hyperedges, each stored ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperMatching {
    edges: Vec<Vec<Vertex>>,
}

impl HyperMatching {
    pub fn new(edges: impl IntoIterator<Item = Vec<Vertex>>) -> Self {
        let mut edges: Vec<_> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        edges.sort_unstable();
        Self { edges }
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// One edge per line, ids separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&e.iter().join(" "));
            out.push('\n');
        }
        out
    }
}

/// Outcome of [`verify_perfect_matching`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MatchingVerdict {
    Perfect,
    NonEdge { edge: Vec<Vertex> },
    Overlap { vertex: Vertex },
    Uncovered { vertex: Vertex },
}

impl MatchingVerdict {
    pub fn is_perfect(&self) -> bool {
        matches!(self, Self::Perfect)
    }
}

/// Checks that `matching` consists of edges of `h`, is pairwise disjoint and
/// covers `[0, n)`.
pub fn verify_perfect_matching(h: &Hypergraph, matching: &HyperMatching) -> MatchingVerdict {
    let mut covered = vec![false; h.n()];
    for e in matching.edges() {
        if !h.contains_edge(e) {
            return MatchingVerdict::NonEdge { edge: e.clone() };
        }
        for &v in e {
            if std::mem::replace(&mut covered[v], true) {
                return MatchingVerdict::Overlap { vertex: v };
            }
        }
    }
    match covered.iter().position(|&c| !c) {
        Some(vertex) => MatchingVerdict::Uncovered { vertex },
        None => MatchingVerdict::Perfect,
    }
}
