//! Exhaustive perfect-matching search, used as a test oracle.
//!
//! Backtracks on the lowest uncovered vertex, trying its edges in
//! lexicographic order. Any edge covering that vertex must have it as its
//! minimum, so candidates are grouped by first vertex. Exponential; intended
//! for `n` up to about 21 at `k = 3`.

use thiserror::Error;

use super::{HyperMatching, Hypergraph, Vertex};

/// Vertex sets are tracked in a `u128`.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleRefusal {
    #[error("k does not divide n (n = {n}, k = {k})")]
    Indivisible { n: usize, k: usize },
    #[error("n = {0} exceeds the exhaustive search limit of {BRUTE_FORCE_MAX_VERTICES}")]
    TooLarge(usize),
}

struct Search<'a> {
    n: usize,
    by_first: Vec<Vec<(u128, &'a [Vertex])>>,
}

impl<'a> Search<'a> {
    fn new(h: &'a Hypergraph) -> Result<Self, OracleRefusal> {
        let (n, k) = (h.n(), h.k());
        if n % k != 0 {
            return Err(OracleRefusal::Indivisible { n, k });
        }
        if n > BRUTE_FORCE_MAX_VERTICES {
            return Err(OracleRefusal::TooLarge(n));
        }
        let mut by_first = vec![Vec::new(); n];
        for e in h.edges() {
            let mask = e.iter().fold(0u128, |acc, &v| acc | (1u128 << v));
            by_first[e[0]].push((mask, e.as_slice()));
        }
        Ok(Self { n, by_first })
    }

    fn full(&self) -> u128 {
        if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        }
    }

    fn find(&self, covered: u128, chosen: &mut Vec<&'a [Vertex]>) -> bool {
        if covered == self.full() {
            return true;
        }
        let v = (!covered).trailing_zeros() as usize;
        for &(mask, e) in &self.by_first[v] {
            if mask & covered == 0 {
                chosen.push(e);
                if self.find(covered | mask, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    fn count(&self, covered: u128) -> u64 {
        if covered == self.full() {
            return 1;
        }
        let v = (!covered).trailing_zeros() as usize;
        self.by_first[v]
            .iter()
            .filter(|&&(mask, _)| mask & covered == 0)
            .map(|&(mask, _)| self.count(covered | mask))
            .sum()
    }
}

/// Some perfect matching of `h`, or `Ok(None)` when none exists.
pub fn brute_force_pm(h: &Hypergraph) -> Result<Option<HyperMatching>, OracleRefusal> {
    let search = Search::new(h)?;
    let mut chosen = Vec::new();
    Ok(search
        .find(0, &mut chosen)
        .then(|| HyperMatching::new(chosen.into_iter().map(<[Vertex]>::to_vec))))
}

/// Exact number of perfect matchings of `h`.
pub fn count_pms(h: &Hypergraph) -> Result<u64, OracleRefusal> {
    Ok(Search::new(h)?.count(0))
}
