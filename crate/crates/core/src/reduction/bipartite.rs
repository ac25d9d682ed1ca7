//! Balanced bipartite graphs, Hopcroft-Karp maximum matching and Hall
//! certificates.

use std::collections::VecDeque;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::ReductionError;

/// A bipartite graph with `m` rows on the left and `m` vertices on the right.
/// `adjacency[row]` is ascending and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    m: usize,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl BipartiteGraph {
    /// Neighbour lists are sorted and deduplicated.
    pub fn new(m: usize, adjacency: Vec<Vec<usize>>) -> Result<Self, ReductionError> {
        if adjacency.len() != m {
            return Err(ReductionError::RowCount { got: adjacency.len(), expected: m });
        }
        let mut adjacency = adjacency;
        for (row, list) in adjacency.iter_mut().enumerate() {
            if let Some(&v) = list.iter().find(|&&v| v >= m) {
                return Err(ReductionError::NeighborOutOfRange { row, neighbor: v, m });
            }
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { m, adjacency })
    }

    pub fn empty(m: usize) -> Self {
        Self { m, adjacency: vec![Vec::new(); m] }
    }

    pub fn complete(m: usize) -> Self {
        Self { m, adjacency: vec![(0..m).collect(); m] }
    }

    /// Left `i` is adjacent to right `j` iff bit `j` of `rows[i]` is set.
    pub fn from_row_masks(m: usize, rows: &[u64]) -> Self {
        assert!(m <= 64 && rows.len() == m);
        let adjacency = rows.iter().map(|&mask| (0..m).filter(|&j| mask >> j & 1 == 1).collect()).collect();
        Self { m, adjacency }
    }

    pub(crate) fn from_sorted(m: usize, adjacency: Vec<Vec<usize>>) -> Self {
        debug_assert!(adjacency.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        Self { m, adjacency }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, row: usize) -> &[usize] {
        &self.adjacency[row]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, row: usize, right: usize) -> bool {
        self.adjacency[row].binary_search(&right).is_ok()
    }

    /// Neighbour lists of the right-hand vertices.
    pub fn right_adjacency(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for (row, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                out[v].push(row);
            }
        }
        out
    }

    /// The graph with sides swapped.
    pub fn transpose(&self) -> Self {
        Self { m: self.m, adjacency: self.right_adjacency() }
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.m];
        self.adjacency.iter().flatten().for_each(|&v| deg[v] += 1);
        deg
    }

    /// Minimum degree over both sides; 0 for `m = 0`.
    pub fn min_degree(&self) -> usize {
        self.left_degrees().into_iter().chain(self.right_degrees()).min().unwrap_or(0)
    }

    /// Ascending union of the neighbourhoods of `set` on `side`.
    pub fn neighborhood(&self, side: Side, set: &[usize]) -> Vec<usize> {
        let mut hit = vec![false; self.m];
        match side {
            Side::Left => set.iter().flat_map(|&r| &self.adjacency[r]).for_each(|&v| hit[v] = true),
            Side::Right => {
                for (row, list) in self.adjacency.iter().enumerate() {
                    if list.iter().any(|v| set.contains(v)) {
                        hit[row] = true;
                    }
                }
            }
        }
        (0..self.m).filter(|&v| hit[v]).collect()
    }

    /// Text format: line 1 is `m`; then `m` lines, each either the ascending
    /// neighbour ids of one row separated by single spaces or `-` for none.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.m);
        for list in &self.adjacency {
            if list.is_empty() {
                out.push('-');
            } else {
                out.push_str(&list.iter().join(" "));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ReductionError> {
        let parse = |line: usize, msg: String| ReductionError::Parse { line, message: msg };
        let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse(1, "missing row count".into()))?;
        let m: usize = header.trim().parse().map_err(|_| parse(1, format!("bad row count {header:?}")))?;
        let mut adjacency = Vec::with_capacity(m);
        for (i, line) in lines {
            if adjacency.len() == m {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(parse(i + 1, "more rows than declared".into()));
            }
            if line == "-" {
                adjacency.push(Vec::new());
                continue;
            }
            let ids: Vec<usize> = line
                .split(' ')
                .map(|t| t.parse().map_err(|_| parse(i + 1, format!("bad neighbour id {t:?}"))))
                .collect::<Result<_, _>>()?;
            if ids.windows(2).any(|w| w[0] >= w[1]) {
                return Err(parse(i + 1, "neighbour ids must be strictly ascending".into()));
            }
            adjacency.push(ids);
        }
        if adjacency.len() != m {
            return Err(parse(m + 1, format!("expected {m} rows, found {}", adjacency.len())));
        }
        Self::new(m, adjacency)
    }
}

/// A matching as a partial map from rows to right vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteMatching {
    row_to_right: Vec<Option<usize>>,
}

impl BipartiteMatching {
    pub fn new(row_to_right: Vec<Option<usize>>) -> Self {
        Self { row_to_right }
    }

    pub fn partner(&self, row: usize) -> Option<usize> {
        self.row_to_right[row]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_to_right.iter().enumerate().filter_map(|(r, v)| v.map(|v| (r, v)))
    }

    pub fn size(&self) -> usize {
        self.row_to_right.iter().flatten().count()
    }

    pub fn is_perfect(&self) -> bool {
        self.row_to_right.iter().all(Option::is_some)
    }

    /// Injective and supported on edges of `g`.
    pub fn is_valid_for(&self, g: &BipartiteGraph) -> bool {
        if self.row_to_right.len() != g.m() {
            return false;
        }
        let mut used = vec![false; g.m()];
        self.pairs().all(|(r, v)| v < g.m() && g.has_edge(r, v) && !std::mem::replace(&mut used[v], true))
    }
}

const UNMATCHED: usize = usize::MAX;
const UNREACHED: usize = usize::MAX;

struct HopcroftKarp<'a> {
    g: &'a BipartiteGraph,
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    layer: Vec<usize>,
    next_edge: Vec<usize>,
}

impl HopcroftKarp<'_> {
    /// Layers free rows at 0; returns whether some free right vertex is reachable.
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for row in 0..self.g.m() {
            if self.match_left[row] == UNMATCHED {
                self.layer[row] = 0;
                queue.push_back(row);
            } else {
                self.layer[row] = UNREACHED;
            }
        }
        let mut found = false;
        while let Some(row) = queue.pop_front() {
            for &v in self.g.neighbors(row) {
                let w = self.match_right[v];
                if w == UNMATCHED {
                    found = true;
                } else if self.layer[w] == UNREACHED {
                    self.layer[w] = self.layer[row] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn dfs(&mut self, row: usize) -> bool {
        while self.next_edge[row] < self.g.neighbors(row).len() {
            let v = self.g.neighbors(row)[self.next_edge[row]];
            self.next_edge[row] += 1;
            let w = self.match_right[v];
            if w == UNMATCHED || (self.layer[w] == self.layer[row] + 1 && self.dfs(w)) {
                self.match_left[row] = v;
                self.match_right[v] = row;
                return true;
            }
        }
        self.layer[row] = UNREACHED;
        false
    }
}

/// Maximum-cardinality matching by layered augmenting paths, `O(E sqrt(V))`.
/// Deterministic in the stored adjacency order.
pub fn max_matching(g: &BipartiteGraph) -> BipartiteMatching {
    let m = g.m();
    let mut hk = HopcroftKarp {
        g,
        match_left: vec![UNMATCHED; m],
        match_right: vec![UNMATCHED; m],
        layer: vec![UNREACHED; m],
        next_edge: vec![0; m],
    };
    while hk.bfs() {
        hk.next_edge.iter_mut().for_each(|e| *e = 0);
        for row in 0..m {
            if hk.match_left[row] == UNMATCHED {
                hk.dfs(row);
            }
        }
    }
    BipartiteMatching::new(hk.match_left.into_iter().map(|v| (v != UNMATCHED).then_some(v)).collect())
}

/// A set `vertices` on `side` whose neighbourhood is strictly smaller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallCertificate {
    pub side: Side,
    pub vertices: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

impl HallCertificate {
    /// Recomputes `N(X)` from `g` and checks `|N(X)| < |X|`.
    pub fn is_valid_for(&self, g: &BipartiteGraph) -> bool {
        self.vertices.iter().all(|&v| v < g.m())
            && g.neighborhood(self.side, &self.vertices) == self.neighborhood
            && self.neighborhood.len() < self.vertices.len()
    }

    pub fn deficiency(&self) -> usize {
        self.vertices.len().saturating_sub(self.neighborhood.len())
    }
}

/// Left-side Hall violator: the rows reachable by alternating paths from the
/// unmatched rows of a maximum matching.
pub fn hall_certificate(g: &BipartiteGraph) -> Result<HallCertificate, ReductionError> {
    let matching = max_matching(g);
    if matching.is_perfect() {
        return Err(ReductionError::HasPerfectMatching);
    }
    Ok(alternating_certificate(g, &matching, Side::Left))
}

/// Hall violator on the requested side.
pub fn hall_certificate_on(g: &BipartiteGraph, side: Side) -> Result<HallCertificate, ReductionError> {
    match side {
        Side::Left => hall_certificate(g),
        Side::Right => {
            let mut cert = hall_certificate(&g.transpose())?;
            cert.side = Side::Right;
            Ok(cert)
        }
    }
}

/// Built from an existing maximum matching of `g`.
pub(crate) fn alternating_certificate(g: &BipartiteGraph, matching: &BipartiteMatching, side: Side) -> HallCertificate {
    let m = g.m();
    let mut match_right = vec![UNMATCHED; m];
    for (r, v) in matching.pairs() {
        match_right[v] = r;
    }
    let mut seen_left = vec![false; m];
    let mut seen_right = vec![false; m];
    let mut queue: VecDeque<usize> = (0..m).filter(|&r| matching.partner(r).is_none()).collect();
    queue.iter().for_each(|&r| seen_left[r] = true);
    while let Some(row) = queue.pop_front() {
        for &v in g.neighbors(row) {
            if !std::mem::replace(&mut seen_right[v], true) {
                let w = match_right[v];
                debug_assert!(w != UNMATCHED, "maximum matching admits no augmenting path");
                if w != UNMATCHED && !std::mem::replace(&mut seen_left[w], true) {
                    queue.push_back(w);
                }
            }
        }
    }
    HallCertificate {
        side,
        vertices: (0..m).filter(|&r| seen_left[r]).collect(),
        neighborhood: (0..m).filter(|&v| seen_right[v]).collect(),
    }
}
