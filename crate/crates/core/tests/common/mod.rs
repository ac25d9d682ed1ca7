//! Brute-force oracles shared by the integration tests. None of them call
//! into the algorithms they check.

#![allow(dead_code)]

use std::collections::HashSet;

use hypermatch::{BipartiteGraph, HyperMatching, Hypergraph};

/// Maximum matching size by exhaustive search over rows.
pub fn brute_max_matching(g: &BipartiteGraph) -> usize {
    fn go(g: &BipartiteGraph, row: usize, used: u64) -> usize {
        if row == g.m() {
            return 0;
        }
        let mut best = go(g, row + 1, used);
        for &j in g.neighbors(row) {
            if used & (1 << j) == 0 {
                best = best.max(1 + go(g, row + 1, used | (1 << j)));
            }
        }
        best
    }
    go(g, 0, 0)
}

/// Perfect matching by trying every permutation.
pub fn has_perfect_matching_by_permutation(g: &BipartiteGraph) -> bool {
    fn go(g: &BipartiteGraph, row: usize, used: u64) -> bool {
        row == g.m() || g.neighbors(row).iter().any(|&j| used & (1 << j) == 0 && go(g, row + 1, used | (1 << j)))
    }
    go(g, 0, 0)
}

/// Kuhn's augmenting-path algorithm, for a second opinion on larger graphs.
pub fn kuhn_perfect(g: &BipartiteGraph) -> bool {
    let m = g.m();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    fn augment(g: &BipartiteGraph, row: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in g.neighbors(row) {
            if !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|r| augment(g, r, seen, owner)) {
                    owner[j] = Some(row);
                    return true;
                }
            }
        }
        false
    }
    (0..m).all(|row| augment(g, row, &mut vec![false; m], &mut owner))
}

/// `|N(X)| >= |X|` for every `X` of size `<= max_size` on both sides.
pub fn hall_conditions_hold(g: &BipartiteGraph, max_size: usize) -> bool {
    let m = g.m();
    let left: Vec<u64> = (0..m).map(|i| g.neighbors(i).iter().fold(0, |acc, &j| acc | 1 << j)).collect();
    let mut right = vec![0u64; m];
    for (i, &mask) in left.iter().enumerate() {
        for (j, r) in right.iter_mut().enumerate() {
            if mask >> j & 1 == 1 {
                *r |= 1 << i;
            }
        }
    }
    [left, right].iter().all(|side| {
        (0u64..1 << m).filter(|x| x.count_ones() as usize <= max_size).all(|x| {
            let nb = (0..m).filter(|&i| x >> i & 1 == 1).fold(0u64, |acc, i| acc | side[i]);
            nb.count_ones() >= x.count_ones()
        })
    })
}

/// Bipartite graph whose row `i` is the bit pattern `bits >> (i m)`.
pub fn graph_from_bits(m: usize, bits: u64) -> BipartiteGraph {
    let adjacency = (0..m).map(|i| (0..m).filter(|&j| bits >> (i * m + j) & 1 == 1).collect()).collect();
    BipartiteGraph::new(m, adjacency).expect("valid adjacency")
}

/// `Bin(n, q)` point masses by repeated convolution.
pub fn binomial_pmf(n: usize, q: f64) -> Vec<f64> {
    let mut pmf = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; pmf.len() + 1];
        for (j, &w) in pmf.iter().enumerate() {
            next[j] += w * (1.0 - q);
            next[j + 1] += w * q;
        }
        pmf = next;
    }
    pmf
}

/// Hypergeometric point masses: `draws` from `total` items of which `good`
/// are marked.
pub fn hypergeometric_pmf(total: usize, good: usize, draws: usize) -> Vec<f64> {
    let ln_choose = |n: usize, k: usize| -> f64 {
        (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
    };
    (0..=draws)
        .map(|j| {
            if j > good || draws - j > total - good {
                0.0
            } else {
                (ln_choose(good, j) + ln_choose(total - good, draws - j) - ln_choose(total, draws)).exp()
            }
        })
        .collect()
}

/// Edges of `m` are edges of `h`, pairwise disjoint, and cover `[0, n)`.
pub fn is_perfect_matching(h: &Hypergraph, m: &HyperMatching) -> bool {
    let edges: HashSet<&[usize]> = h.edges().iter().map(Vec::as_slice).collect();
    let mut covered = vec![false; h.n()];
    for e in m.edges() {
        if !edges.contains(e.as_slice()) {
            return false;
        }
        for &v in e {
            if v >= h.n() || std::mem::replace(&mut covered[v], true) {
                return false;
            }
        }
    }
    covered.iter().all(|&c| c)
}

/// Number of perfect matchings by recursion on the smallest uncovered vertex.
pub fn naive_count_pms(h: &Hypergraph) -> u64 {
    fn go(edges: &[Vec<usize>], covered: &mut Vec<bool>) -> u64 {
        let Some(v) = covered.iter().position(|&c| !c) else { return 1 };
        let mut total = 0;
        for e in edges.iter().filter(|e| e[0] == v) {
            if e.iter().all(|&u| !covered[u]) {
                e.iter().for_each(|&u| covered[u] = true);
                total += go(edges, covered);
                e.iter().for_each(|&u| covered[u] = false);
            }
        }
        total
    }
    if !h.n().is_multiple_of(h.k()) {
        return 0;
    }
    go(h.edges(), &mut vec![false; h.n()])
}
