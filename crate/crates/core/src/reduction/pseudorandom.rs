//! `(eps, p)`-pseudorandomness of a balanced bipartite graph with sides of
//! size `m`:
//!
//! 1. minimum degree at least `(1/2 + eps) m p`;
//! 2. `e(X, Y) <= m p |X| / 2` whenever `|X| - 1 = |Y| <= m / 10`;
//! 3. `e(X, Y) <= (1/2 + eps/2) m p |X|` whenever `m / 10 <= |X| - 1 = |Y| <= m / 2`.
//!
//! Size classes use exact rational comparisons with inclusive endpoints.
//! Properties 2 and 3 are checked in both orientations (`X` among the rows
//! and `X` among the right vertices), since a Hall violator may sit on either
//! side. For a fixed `X` the worst `Y` of size `|X| - 1` is the set of
//! opposite vertices with the most neighbours in `X`, so only `X` is
//! enumerated.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::bipartite::{BipartiteGraph, Side};
use super::ReductionError;
use crate::randgen::RngSeed;

/// Largest `m` accepted by [`CheckMode::Exact`] (cost `2^m * m` per side).
pub const EXACT_MAX_M: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    /// Every `X` of every relevant size.
    Exact,
    /// `trials` uniform `X` per size. One-sided: a pass is not a certificate.
    Sampled { seed: RngSeed, trials: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PseudorandomWitness {
    LowDegree { side: Side, vertex: usize, degree: usize },
    /// `x` lies on `side`, `y` on the other side.
    DensePair { side: Side, x: Vec<usize>, y: Vec<usize>, edges: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudorandomVerdict {
    pub pseudorandom: bool,
    /// 1, 2 or 3.
    pub failed_property: Option<u8>,
    pub witness: Option<PseudorandomWitness>,
    pub mode: CheckMode,
}

impl PseudorandomVerdict {
    /// Exact mode and no violation.
    pub fn certified(&self) -> bool {
        self.pseudorandom && self.mode == CheckMode::Exact
    }
}

#[derive(Clone, Copy, Debug)]
struct Caps {
    m: usize,
    eps: f64,
    p: f64,
}

impl Caps {
    fn min_degree(&self) -> f64 {
        (0.5 + self.eps) * self.m as f64 * self.p
    }

    /// The property a pair with `|X| = x` and `e(X, Y) = edges` violates.
    fn violated(&self, x: usize, edges: usize) -> Option<u8> {
        let y = x - 1;
        let mpx = self.m as f64 * self.p * x as f64;
        let e = edges as f64;
        if 10 * y <= self.m && e > mpx / 2.0 {
            return Some(2);
        }
        if self.m <= 10 * y && 2 * y <= self.m && e > (0.5 + self.eps / 2.0) * mpx {
            return Some(3);
        }
        None
    }

    /// `|X|` values whose `|Y| = |X| - 1` lies in `[1, m/2]`.
    fn sizes(&self) -> impl Iterator<Item = usize> {
        let m = self.m;
        (2..=m).filter(move |&x| 2 * (x - 1) <= m)
    }
}

impl PseudorandomWitness {
    /// Whether this witness violates the corresponding property of `g`
    /// under recomputation.
    pub fn violates(&self, g: &BipartiteGraph, eps: f64, p: f64) -> bool {
        let caps = Caps { m: g.m(), eps, p };
        match self {
            Self::LowDegree { side, vertex, degree } => {
                let actual = match side {
                    Side::Left => g.left_degrees()[*vertex],
                    Side::Right => g.right_degrees()[*vertex],
                };
                actual == *degree && (actual as f64) < caps.min_degree()
            }
            Self::DensePair { side, x, y, edges } => {
                if x.is_empty() || y.len() + 1 != x.len() {
                    return false;
                }
                let count = match side {
                    Side::Left => x.iter().map(|&r| y.iter().filter(|&&v| g.has_edge(r, v)).count()).sum(),
                    Side::Right => y.iter().map(|&r| x.iter().filter(|&&v| g.has_edge(r, v)).count()).sum(),
                };
                count == *edges && caps.violated(x.len(), count).is_some()
            }
        }
    }
}

/// Checks the three properties. Property 1 is always exact.
pub fn is_pseudorandom(
    g: &BipartiteGraph,
    eps: f64,
    p: f64,
    mode: CheckMode,
) -> Result<PseudorandomVerdict, ReductionError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ReductionError::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(ReductionError::InvalidParameter(format!("p must lie in (0, 1], got {p}")));
    }
    match mode {
        CheckMode::Exact if g.m() > EXACT_MAX_M => {
            return Err(ReductionError::InvalidParameter(format!(
                "exact mode supports m <= {EXACT_MAX_M}, got {}",
                g.m()
            )))
        }
        CheckMode::Sampled { trials: 0, .. } => {
            return Err(ReductionError::InvalidParameter("sampled mode needs trials >= 1".into()))
        }
        _ => {}
    }
    let caps = Caps { m: g.m(), eps, p };
    let fail = |property, witness| PseudorandomVerdict {
        pseudorandom: false,
        failed_property: Some(property),
        witness: Some(witness),
        mode,
    };

    let threshold = caps.min_degree();
    for (side, degrees) in [(Side::Left, g.left_degrees()), (Side::Right, g.right_degrees())] {
        if let Some((vertex, &degree)) = degrees.iter().enumerate().find(|&(_, &d)| (d as f64) < threshold) {
            return Ok(fail(1, PseudorandomWitness::LowDegree { side, vertex, degree }));
        }
    }

    let right_adj = g.right_adjacency();
    // For X on `side`, `opposite[j]` lists the X-side neighbours of opposite vertex j.
    let orientations = [(Side::Left, right_adj.as_slice()), (Side::Right, g.adjacency())];
    for (side, opposite) in orientations {
        let found = match mode {
            CheckMode::Exact => exact_dense_pair(&caps, opposite),
            CheckMode::Sampled { seed, trials } => {
                let label = match side {
                    Side::Left => 0,
                    Side::Right => 1,
                };
                sampled_dense_pair(&caps, opposite, seed.derive(label), trials)
            }
        };
        if let Some((property, x, y, edges)) = found {
            return Ok(fail(property, PseudorandomWitness::DensePair { side, x, y, edges }));
        }
    }
    Ok(PseudorandomVerdict { pseudorandom: true, failed_property: None, witness: None, mode })
}

type DensePair = (u8, Vec<usize>, Vec<usize>, usize);

/// Sum of the `y` largest degrees into X, with the chosen opposite vertices
/// (ties broken by index).
fn top_y(degrees: &[usize], y: usize, order: &mut Vec<usize>) -> usize {
    order.clear();
    order.extend(0..degrees.len());
    order.sort_unstable_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    order.truncate(y);
    order.iter().map(|&j| degrees[j]).sum()
}

fn exact_dense_pair(caps: &Caps, opposite: &[Vec<usize>]) -> Option<DensePair> {
    let m = caps.m;
    if m < 2 {
        return None;
    }
    let masks: Vec<u32> = opposite.iter().map(|l| l.iter().fold(0u32, |acc, &v| acc | 1 << v)).collect();
    let max_x = caps.sizes().max()?;
    let mut degrees = vec![0usize; m];
    let mut order = Vec::with_capacity(m);
    for set in 1u32..(1u32 << m) {
        let x = set.count_ones() as usize;
        if !(2..=max_x).contains(&x) {
            continue;
        }
        for (d, mask) in degrees.iter_mut().zip(&masks) {
            *d = (mask & set).count_ones() as usize;
        }
        let edges = top_y(&degrees, x - 1, &mut order);
        if let Some(property) = caps.violated(x, edges) {
            let xs = (0..m).filter(|&i| set >> i & 1 == 1).collect();
            let mut ys = order.clone();
            ys.sort_unstable();
            return Some((property, xs, ys, edges));
        }
    }
    None
}

fn sampled_dense_pair(caps: &Caps, opposite: &[Vec<usize>], seed: RngSeed, trials: usize) -> Option<DensePair> {
    let m = caps.m;
    let mut rng = seed.rng();
    let mut in_x = vec![false; m];
    let mut degrees = vec![0usize; m];
    let mut order = Vec::with_capacity(m);
    for x in caps.sizes() {
        for _ in 0..trials {
            let chosen = index::sample(&mut rng, m, x).into_vec();
            chosen.iter().for_each(|&i| in_x[i] = true);
            for (d, list) in degrees.iter_mut().zip(opposite) {
                *d = list.iter().filter(|&&v| in_x[v]).count();
            }
            chosen.iter().for_each(|&i| in_x[i] = false);
            let edges = top_y(&degrees, x - 1, &mut order);
            if let Some(property) = caps.violated(x, edges) {
                let mut xs = chosen;
                xs.sort_unstable();
                let mut ys = order.clone();
                ys.sort_unstable();
                return Some((property, xs, ys, edges));
            }
        }
    }
    None
}
