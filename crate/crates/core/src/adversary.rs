//! Edge-deletion adversaries.
//!
//! [`parity_adversary`] keeps only the edges meeting an odd-sized set `V_1`
//! in an even number of vertices, which rules out every perfect matching
//! while leaving co-degrees near `np / 2`. [`greedy_budget_adversary`]
//! deletes as many edges as it can while keeping every touched co-degree at
//! or above a threshold.
//!
//! The greedy adversary is order dependent and therefore sequential; run
//! distinct seeds in parallel instead.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Vertex};
use crate::randgen::RngSeed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("V_1 must have odd size, got {0}")]
    EvenOddSet(usize),
    #[error("V_1 vertex {vertex} is outside [0, {n})")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("V_1 repeats vertex {0}")]
    Repeated(Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AdversarySpec {
    Parity { v1: Vec<Vertex> },
    Greedy { threshold: usize, seed: RngSeed },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryOutcome {
    pub result: Hypergraph,
    pub deleted: usize,
    /// `δ_{k-1}` of `result`.
    pub residual_min_codegree: usize,
    pub spec: AdversarySpec,
}

/// JSON-friendly summary of an outcome, without the hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySummary {
    pub spec: AdversarySpec,
    pub edges_before: usize,
    pub edges_after: usize,
    pub deleted: usize,
    pub residual_min_codegree: usize,
}

impl AdversaryOutcome {
    pub fn summary(&self) -> AdversarySummary {
        AdversarySummary {
            spec: self.spec.clone(),
            edges_before: self.result.edge_count() + self.deleted,
            edges_after: self.result.edge_count(),
            deleted: self.deleted,
            residual_min_codegree: self.residual_min_codegree,
        }
    }
}

/// Size of the default `V_1`: `ceil(n / 2)`, minus one when that is even.
pub fn default_v1_size(n: usize) -> usize {
    let half = n.div_ceil(2);
    if half.is_multiple_of(2) {
        half - 1
    } else {
        half
    }
}

/// `{0, ..., default_v1_size(n) - 1}`.
pub fn default_v1(n: usize) -> Vec<Vertex> {
    (0..default_v1_size(n)).collect()
}

/// Deletes every edge meeting `v1` in an odd number of vertices.
/// `v1 = None` uses [`default_v1`].
pub fn parity_adversary(h: &Hypergraph, v1: Option<&[Vertex]>) -> Result<AdversaryOutcome, AdversaryError> {
    let n = h.n();
    let mut v1: Vec<Vertex> = v1.map_or_else(|| default_v1(n), <[Vertex]>::to_vec);
    v1.sort_unstable();
    if let Some(&vertex) = v1.iter().find(|&&v| v >= n) {
        return Err(AdversaryError::OutOfRange { vertex, n });
    }
    if let Some(w) = v1.windows(2).find(|w| w[0] == w[1]) {
        return Err(AdversaryError::Repeated(w[0]));
    }
    if v1.len().is_multiple_of(2) {
        return Err(AdversaryError::EvenOddSet(v1.len()));
    }
    let mut in_v1 = vec![false; n];
    v1.iter().for_each(|&v| in_v1[v] = true);
    let result = h.filter_edges(|e| e.iter().filter(|&&v| in_v1[v]).count() % 2 == 0);
    let deleted = h.edge_count() - result.edge_count();
    let residual_min_codegree = result.min_max_codegree().0;
    Ok(AdversaryOutcome { result, deleted, residual_min_codegree, spec: AdversarySpec::Parity { v1 } })
}

/// Visits edges in a seeded random order and deletes an edge whenever each
/// of its k (k-1)-subsets keeps co-degree `>= threshold` afterwards.
pub fn greedy_budget_adversary(h: &Hypergraph, threshold: usize, seed: RngSeed) -> AdversaryOutcome {
    let k = h.k();
    let mut degree: HashMap<&[Vertex], usize> = h.index().iter().map(|(x, c)| (x, c.len())).collect();
    let mut order: Vec<usize> = (0..h.edge_count()).collect();
    order.shuffle(&mut seed.rng());

    let mut removed = vec![false; h.edge_count()];
    let mut subsets: Vec<Vec<Vertex>> = vec![Vec::with_capacity(k - 1); k];
    for idx in order {
        let e = &h.edges()[idx];
        for (skip, sub) in subsets.iter_mut().enumerate() {
            sub.clear();
            sub.extend(e.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v));
        }
        if subsets.iter().all(|sub| degree[sub.as_slice()] > threshold) {
            for sub in &subsets {
                *degree.get_mut(sub.as_slice()).expect("indexed subset") -= 1;
            }
            removed[idx] = true;
        }
    }

    let mut idx = 0;
    let result = h.filter_edges(|_| {
        idx += 1;
        !removed[idx - 1]
    });
    let deleted = h.edge_count() - result.edge_count();
    let residual_min_codegree = result.min_max_codegree().0;
    AdversaryOutcome { result, deleted, residual_min_codegree, spec: AdversarySpec::Greedy { threshold, seed } }
}
