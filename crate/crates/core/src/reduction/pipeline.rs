//! Partition, restrict, search permutations, match, translate, verify.

use serde::{Deserialize, Serialize};

use super::auxiliary::{find_good_pi, translate_matching, PiSearchOutcome, PiStrategy};
use super::bipartite::HallCertificate;
use super::ReductionError;
use crate::hypergraph::{verify_perfect_matching, HyperMatching, Hypergraph, MatchingVerdict};
use crate::partition::PartitionError;
use crate::randgen::{sample_balanced_partition, streams, verify_partition, RngSeed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub partition_retries: usize,
    pub pi_budget: usize,
    pub strategy: PiStrategy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { partition_retries: 50, pi_budget: 200, strategy: PiStrategy::Pi1Only }
    }
}

/// Partition tolerance for a co-degree margin `eps`: the largest `alpha`
/// with `(1 - alpha)(1/2 + eps) >= 1/2 + eps/2`, namely `eps / (1 + 2 eps)`.
pub fn partition_alpha(eps: f64) -> f64 {
    eps / (1.0 + 2.0 * eps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineSuccess {
    pub matching: HyperMatching,
    pub alpha: f64,
    pub partition_passed: bool,
    pub partition_worst_deviation: f64,
    pub partition_attempts: usize,
    pub delta_star: usize,
    pub pi_attempts: usize,
    pub strategy_used: PiStrategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureStage {
    /// No sampled permutation family gave a matchable `B_pi`.
    PiSearch,
    /// A translated matching failed verification against the input.
    Verification,
}

impl FailureStage {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PiSearch => "pi_search",
            Self::Verification => "verification",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub stage: FailureStage,
    pub alpha: f64,
    pub partition_passed: bool,
    pub partition_worst_deviation: f64,
    pub partition_attempts: usize,
    pub delta_star: usize,
    pub pi_attempts: usize,
    pub certificate: Option<HallCertificate>,
    pub verdict: Option<MatchingVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PipelineOutcome {
    Matched(PipelineSuccess),
    Failed(FailureReport),
}

impl PipelineOutcome {
    pub fn matching(&self) -> Option<&HyperMatching> {
        match self {
            Self::Matched(s) => Some(&s.matching),
            Self::Failed(_) => None,
        }
    }
}

/// Looks for a perfect matching of `h` through a balanced partition and an
/// auxiliary bipartite graph.
///
/// Up to `partition_retries` uniform partitions are drawn; the first that
/// splits every co-degree within `(1 ± alpha) d(X) / k` is kept, otherwise
/// the one with the smallest worst deviation. The permutation search then
/// runs on the induced k-partite subhypergraph. Any returned matching has
/// been verified against `h`.
pub fn pipeline_find_pm(
    h: &Hypergraph,
    eps: f64,
    cfg: &PipelineConfig,
    seed: RngSeed,
) -> Result<PipelineOutcome, ReductionError> {
    let (n, k) = (h.n(), h.k());
    if n % k != 0 {
        return Err(PartitionError::Indivisible { n, parts: k }.into());
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ReductionError::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if cfg.partition_retries == 0 || cfg.pi_budget == 0 {
        return Err(ReductionError::ZeroBudget);
    }
    let alpha = partition_alpha(eps);

    let partition_seed = seed.derive(streams::PARTITION);
    let mut best = None;
    let mut partition_attempts = 0;
    for attempt in 0..cfg.partition_retries {
        partition_attempts = attempt + 1;
        let partition = sample_balanced_partition(n, k, partition_seed.derive(attempt as u64))?;
        let report = verify_partition(h, &partition, alpha)?;
        let passed = report.passes();
        let better = best.as_ref().is_none_or(|(_, dev, _)| report.worst_deviation < *dev);
        if better {
            best = Some((partition, report.worst_deviation, passed));
        }
        if passed {
            break;
        }
    }
    let (partition, worst_deviation, partition_passed) = best.expect("at least one partition attempt");

    let hp = h.induce_kpartite(&partition)?;
    let delta_star = hp.delta_star();
    let m = partition.part_size();
    let p_hat = edge_density(h);
    let search = find_good_pi(&hp, eps, p_hat, cfg.pi_budget, seed.derive(streams::PI_SEARCH), cfg.strategy)?;

    let failure = |stage, pi_attempts, certificate, verdict| FailureReport {
        stage,
        alpha,
        partition_passed,
        partition_worst_deviation: worst_deviation,
        partition_attempts,
        delta_star,
        pi_attempts,
        certificate,
        verdict,
    };
    let success = match search {
        PiSearchOutcome::Exhausted(f) => {
            return Ok(PipelineOutcome::Failed(failure(FailureStage::PiSearch, f.attempts, Some(f.certificate), None)))
        }
        PiSearchOutcome::Found(s) => s,
    };
    debug_assert_eq!(success.matching.size(), m);
    let matching = translate_matching(&hp, &success.pi, &success.matching)?;
    let verdict = verify_perfect_matching(h, &matching);
    if !verdict.is_perfect() {
        return Ok(PipelineOutcome::Failed(failure(FailureStage::Verification, success.attempts, None, Some(verdict))));
    }
    Ok(PipelineOutcome::Matched(PipelineSuccess {
        matching,
        alpha,
        partition_passed,
        partition_worst_deviation: worst_deviation,
        partition_attempts,
        delta_star,
        pi_attempts: success.attempts,
        strategy_used: success.strategy_used,
    }))
}

/// `|E| / C(n, k)`, used only for the reported degree target of `B_pi`.
fn edge_density(h: &Hypergraph) -> f64 {
    let (n, k) = (h.n() as f64, h.k());
    let total = (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i as f64 + 1.0));
    h.edge_count() as f64 / total
}
