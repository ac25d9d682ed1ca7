//! Distribution of `d_{B_pi}(v)` when `pi_1` is a uniform permutation and
//! the other permutations are identities.
//!
//! Fix `v ∈ V_k` and write `A_i` for the identity slots of row `i` in parts
//! `2..k-1`. Row `i` of the [`ExtensionMatrix`] marks the vertices `u ∈ V_1`
//! with `{u} ∪ A_i ∪ {v} ∈ E(H')`, so `d_{B_pi}(v) = Σ_i member[i][pi_1(i)]`.
//! Its mean is exactly `d_v / m` and its variance is at most
//! `mu + 2 mu^2 / (m - 1)`.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ConcentrationError;
use crate::hypergraph::PartiteHypergraph;
use crate::randgen::RngSeed;

/// Largest `m` for exact enumeration (`7! = 5040` permutations).
pub const EXACT_MAX_M: usize = 7;

/// Samples per independently seeded batch in empirical mode.
pub const EMPIRICAL_BATCH: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionMatrix {
    member: Vec<Vec<bool>>,
    row_sums: Vec<usize>,
    total: usize,
}

impl ExtensionMatrix {
    pub fn new(member: Vec<Vec<bool>>) -> Result<Self, ConcentrationError> {
        let m = member.len();
        if m == 0 {
            return Err(ConcentrationError::Domain("extension matrix must be non-empty".into()));
        }
        if let Some(row) = member.iter().position(|r| r.len() != m) {
            return Err(ConcentrationError::Domain(format!("row {row} has {} columns, expected {m}", member[row].len())));
        }
        let row_sums: Vec<usize> = member.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
        let total = row_sums.iter().sum();
        Ok(Self { member, row_sums, total })
    }

    /// Entries independently `true` with probability `density`.
    pub fn random(m: usize, density: f64, seed: RngSeed) -> Result<Self, ConcentrationError> {
        use rand::Rng;
        if !(0.0..=1.0).contains(&density) {
            return Err(ConcentrationError::Domain(format!("density must lie in [0, 1], got {density}")));
        }
        let mut rng = seed.rng();
        Self::new((0..m).map(|_| (0..m).map(|_| rng.gen::<f64>() < density).collect()).collect())
    }

    /// The matrix of `H'` for the vertex at position `v_index` of the last part.
    pub fn from_partite(hp: &PartiteHypergraph, v_index: usize) -> Result<Self, ConcentrationError> {
        let partition = hp.partition();
        let k = partition.num_parts();
        let m = partition.part_size();
        if v_index >= m {
            return Err(ConcentrationError::Domain(format!("v_index {v_index} outside [0, {m})")));
        }
        let v = partition.part(k - 1)[v_index];
        let h = hp.hypergraph();
        let member = (0..m)
            .map(|i| {
                let mut edge: Vec<usize> = (1..k - 1).map(|j| partition.part(j)[i]).collect();
                edge.push(v);
                edge.push(0);
                (0..m)
                    .map(|u| {
                        *edge.last_mut().expect("non-empty") = partition.part(0)[u];
                        h.contains_edge(&edge)
                    })
                    .collect()
            })
            .collect();
        Self::new(member)
    }

    pub fn m(&self) -> usize {
        self.member.len()
    }

    pub fn member(&self, row: usize, col: usize) -> bool {
        self.member[row][col]
    }

    /// `d_i(v)`.
    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    /// `d_v`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// `mu_v = d_v / m`.
    pub fn mu(&self) -> f64 {
        self.total as f64 / self.m() as f64
    }

    /// `mu + 2 mu^2 / (m - 1)`; infinite for `m = 1`.
    pub fn variance_bound(&self) -> f64 {
        let mu = self.mu();
        let m = self.m();
        if m == 1 {
            return f64::INFINITY;
        }
        mu + 2.0 * mu * mu / (m - 1) as f64
    }

    /// `Σ_i member[i][perm[i]]`.
    pub fn degree_under(&self, perm: &[usize]) -> usize {
        perm.iter().enumerate().filter(|&(i, &u)| self.member[i][u]).count()
    }

    /// Line 1 is `m`, then `m` lines of `m` characters `0`/`1`.
    pub fn from_text(text: &str) -> Result<Self, ConcentrationError> {
        let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| ConcentrationError::Parse("missing size line".into()))?;
        let m: usize = header.trim().parse().map_err(|_| ConcentrationError::Parse(format!("bad size {header:?}")))?;
        let member: Vec<Vec<bool>> = lines
            .map(|l| {
                l.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(ConcentrationError::Parse(format!("unexpected character {other:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        if member.len() != m {
            return Err(ConcentrationError::Parse(format!("expected {m} rows, found {}", member.len())));
        }
        Self::new(member)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.m());
        for row in &self.member {
            out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatsMode {
    Exact,
    Empirical { samples: usize, seed: RngSeed },
}

/// Exact law of `d_{B_pi}(v)` as rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMoments {
    /// `distribution[d]` counts permutations with degree `d`.
    pub distribution: Vec<u64>,
    pub mean: Ratio<i128>,
    pub variance: Ratio<i128>,
}

impl ExactMoments {
    /// `d_v / m` as a rational.
    pub fn expected_mean(e: &ExtensionMatrix) -> Ratio<i128> {
        Ratio::new(e.total() as i128, e.m() as i128)
    }

    /// `mu + 2 mu^2 / (m - 1)` as a rational; `None` for `m = 1`.
    pub fn variance_bound(e: &ExtensionMatrix) -> Option<Ratio<i128>> {
        let m = e.m() as i128;
        (m > 1).then(|| {
            let mu = Self::expected_mean(e);
            mu + Ratio::from_integer(2) * mu * mu / Ratio::from_integer(m - 1)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionStats {
    pub mode: StatsMode,
    /// `d_v / m`.
    pub mu: f64,
    /// Exact or sample mean of `d_{B_pi}(v)`.
    pub mean: f64,
    /// Exact (population) or sample (unbiased) variance.
    pub variance: f64,
    pub variance_bound: f64,
    /// Lower median: the `ceil(q/2)`-th smallest of the `q` observed values.
    pub median: usize,
    pub alpha: Option<f64>,
    /// `median ∈ [(1 - alpha) mu, (1 + alpha) mu]`, when `alpha` is given.
    pub containment: Option<bool>,
    #[serde(skip)]
    pub exact: Option<ExactMoments>,
}

fn containment(median: usize, mu: f64, alpha: Option<f64>) -> Option<bool> {
    alpha.map(|a| {
        let med = median as f64;
        (1.0 - a) * mu <= med && med <= (1.0 + a) * mu
    })
}

/// Enumerates all `m!` permutations of `V_1` (requires `m <= 7`).
pub fn extension_stats_exact(e: &ExtensionMatrix, alpha: Option<f64>) -> Result<ExtensionStats, ConcentrationError> {
    let m = e.m();
    if m > EXACT_MAX_M {
        return Err(ConcentrationError::Domain(format!("exact mode supports m <= {EXACT_MAX_M}, got {m}")));
    }
    let mut distribution = vec![0u64; m + 1];
    let mut perm: Vec<usize> = (0..m).collect();
    // Heap's algorithm, iterative form.
    let mut stack = vec![0usize; m];
    distribution[e.degree_under(&perm)] += 1;
    let mut i = 1;
    while i < m {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            distribution[e.degree_under(&perm)] += 1;
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }

    let count: u64 = distribution.iter().sum();
    let (s1, s2) = distribution.iter().enumerate().fold((0i128, 0i128), |(a, b), (d, &c)| {
        let (d, c) = (d as i128, c as i128);
        (a + d * c, b + d * d * c)
    });
    let q = count as i128;
    let mean = Ratio::new(s1, q);
    let variance = Ratio::new(s2, q) - mean * mean;

    let target = count.div_ceil(2);
    let mut seen = 0;
    let median = distribution
        .iter()
        .position(|&c| {
            seen += c;
            seen >= target
        })
        .expect("distribution sums to m!");

    let mu = e.mu();
    Ok(ExtensionStats {
        mode: StatsMode::Exact,
        mu,
        mean: ratio_to_f64(mean),
        variance: ratio_to_f64(variance),
        variance_bound: e.variance_bound(),
        median,
        alpha,
        containment: containment(median, mu, alpha),
        exact: Some(ExactMoments { distribution, mean, variance }),
    })
}

fn ratio_to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Streaming moments of one batch (Welford).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pairwise combination (Chan et al.):
    /// `mean = mean_a + delta * n_b / n`, `m2 = m2_a + m2_b + delta^2 n_a n_b / n`.
    pub fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        Self {
            count: self.count + other.count,
            mean: self.mean + delta * other.count as f64 / n,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * other.count as f64 / n,
        }
    }

    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Draws `samples` uniform permutations `pi_1`. Samples are split into
/// batches of [`EMPIRICAL_BATCH`], batch `b` seeded by `seed.derive(b)`, and
/// merged in batch order, so the result is independent of thread count.
pub fn extension_stats_empirical(
    e: &ExtensionMatrix,
    samples: usize,
    seed: RngSeed,
    alpha: Option<f64>,
) -> Result<ExtensionStats, ConcentrationError> {
    if samples == 0 {
        return Err(ConcentrationError::Domain("empirical mode needs samples >= 1".into()));
    }
    let m = e.m();
    let batches = samples.div_ceil(EMPIRICAL_BATCH);
    let results: Vec<(Moments, Vec<usize>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let len = EMPIRICAL_BATCH.min(samples - b * EMPIRICAL_BATCH);
            let mut rng = seed.derive(b as u64).rng();
            let mut perm: Vec<usize> = (0..m).collect();
            let mut moments = Moments::default();
            let values = (0..len)
                .map(|_| {
                    perm.shuffle(&mut rng);
                    let d = e.degree_under(&perm);
                    moments.push(d as f64);
                    d
                })
                .collect();
            (moments, values)
        })
        .collect();
    let moments = results.iter().fold(Moments::default(), |acc, (mo, _)| acc.merge(*mo));
    let mut values: Vec<usize> = results.into_iter().flat_map(|(_, v)| v).collect();
    let idx = values.len().div_ceil(2) - 1;
    let median = *values.select_nth_unstable(idx).1;

    let mu = e.mu();
    Ok(ExtensionStats {
        mode: StatsMode::Empirical { samples, seed },
        mu,
        mean: moments.mean,
        variance: moments.sample_variance(),
        variance_bound: e.variance_bound(),
        median,
        alpha,
        containment: containment(median, mu, alpha),
        exact: None,
    })
}
