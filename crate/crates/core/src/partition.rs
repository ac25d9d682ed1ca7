//! Balanced partitions `V_1, ..., V_k` of `[0, n)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Vertex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("cannot split {n} vertices into {parts} equal parts")]
    Indivisible { n: usize, parts: usize },
    #[error("a partition needs at least one part")]
    NoParts,
    #[error("part {part} has {size} vertices, expected {expected}")]
    Unbalanced { part: usize, size: usize, expected: usize },
    #[error("vertex {0} appears in more than one part")]
    Duplicate(Vertex),
    #[error("vertex {vertex} is outside [0, {n})")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("partition covers {got} vertices, hypergraph has {expected}")]
    SizeMismatch { got: usize, expected: usize },
    #[error("partition has {got} parts, expected {expected}")]
    PartCountMismatch { got: usize, expected: usize },
}

/// An equipartition of `[0, n)` into `k` parts of size `m = n / k`.
///
/// `parts[i]` is ascending and `assignment[v] == i` iff `v` is in `parts[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedPartition {
    assignment: Vec<usize>,
    parts: Vec<Vec<Vertex>>,
}

impl BalancedPartition {
    pub fn from_parts(n: usize, parts: Vec<Vec<Vertex>>) -> Result<Self, PartitionError> {
        let k = parts.len();
        if k == 0 {
            return Err(PartitionError::NoParts);
        }
        if !n.is_multiple_of(k) {
            return Err(PartitionError::Indivisible { n, parts: k });
        }
        let m = n / k;
        let mut assignment = vec![usize::MAX; n];
        let mut sorted = Vec::with_capacity(k);
        for (i, mut part) in parts.into_iter().enumerate() {
            if part.len() != m {
                return Err(PartitionError::Unbalanced { part: i, size: part.len(), expected: m });
            }
            for &v in &part {
                if v >= n {
                    return Err(PartitionError::OutOfRange { vertex: v, n });
                }
                if assignment[v] != usize::MAX {
                    return Err(PartitionError::Duplicate(v));
                }
                assignment[v] = i;
            }
            part.sort_unstable();
            sorted.push(part);
        }
        Ok(Self { assignment, parts: sorted })
    }

    /// Cuts `order` (a permutation of `[0, n)`) into `k` consecutive blocks.
    pub fn from_order(order: &[Vertex], k: usize) -> Result<Self, PartitionError> {
        if k == 0 {
            return Err(PartitionError::NoParts);
        }
        let n = order.len();
        if !n.is_multiple_of(k) {
            return Err(PartitionError::Indivisible { n, parts: k });
        }
        let m = n / k;
        Self::from_parts(n, order.chunks(m.max(1)).map(<[Vertex]>::to_vec).collect())
    }

    pub fn from_assignment(k: usize, assignment: Vec<usize>) -> Result<Self, PartitionError> {
        if k == 0 {
            return Err(PartitionError::NoParts);
        }
        let n = assignment.len();
        let mut parts = vec![Vec::new(); k];
        for (v, &i) in assignment.iter().enumerate() {
            if i >= k {
                return Err(PartitionError::PartCountMismatch { got: i + 1, expected: k });
            }
            parts[i].push(v);
        }
        Self::from_parts(n, parts)
    }

    pub fn num_vertices(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// `m = n / k`.
    pub fn part_size(&self) -> usize {
        self.parts[0].len()
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        self.assignment[v]
    }

    pub fn part(&self, i: usize) -> &[Vertex] {
        &self.parts[i]
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Position of `v` inside its (ascending) part.
    pub fn index_in_part(&self, v: Vertex) -> usize {
        let part = &self.parts[self.assignment[v]];
        part.binary_search(&v).expect("vertex belongs to its own part")
    }
}
