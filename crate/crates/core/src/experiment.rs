//! Seeded Monte Carlo trials: sample, attack, match, verify, record.
//!
//! Trial `i` uses the seed `mix(base_seed, i)` and is otherwise hermetic, so
//! records do not depend on how rayon schedules them. Records come back in
//! trial order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{default_v1, greedy_budget_adversary, parity_adversary, AdversaryError};
use crate::hypergraph::{verify_perfect_matching, HyperMatching, Hypergraph, HypergraphError, MatchingVerdict};
use crate::randgen::{mix, sample_hypergraph, streams, RngSeed, SamplingError};
use crate::reduction::{pipeline_find_pm, HallCertificate, PiStrategy, PipelineConfig, PipelineOutcome, ReductionError};

/// Bumped whenever the CSV columns change.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 17] = [
    "trial",
    "seed",
    "n",
    "k",
    "p",
    "epsilon",
    "adversary",
    "edges_before",
    "edges_after",
    "residual_min_codegree",
    "partition_worst_deviation",
    "delta_star",
    "pi_attempts",
    "matched",
    "verified",
    "failure_stage",
    "runtime_ms",
];

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("cannot summarize an empty record set")]
    EmptyRecords,
    #[error("trial {trial}: {source}")]
    Sampling { trial: usize, source: SamplingError },
    #[error("trial {trial}: {source}")]
    Adversary { trial: usize, source: AdversaryError },
    #[error("trial {trial}: {source}")]
    Pipeline { trial: usize, source: ReductionError },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

impl ExperimentError {
    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Self + '_ {
        move |source| Self::Io { path: path.to_path_buf(), source }
    }
}

/// Greedy deletion threshold as a function of `(n, p, eps)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ThresholdRule {
    /// `ceil((1/2 + eps) n p)`.
    #[default]
    Theorem,
    Fixed { value: usize },
    /// `ceil(fraction * n p)`.
    Fraction { fraction: f64 },
}

impl ThresholdRule {
    pub fn resolve(self, n: usize, p: f64, eps: f64) -> Result<usize, ExperimentError> {
        let scaled = |c: f64| {
            let x = c * n as f64 * p;
            if !(x.is_finite() && x >= 0.0) {
                return Err(ExperimentError::Config(format!("threshold {x} is not a nonnegative number")));
            }
            // Absorb rounding noise such as 0.7 * 30 = 21.000000000000004.
            Ok((x - 1e-9).ceil().max(0.0) as usize)
        };
        match self {
            Self::Theorem => scaled(0.5 + eps),
            Self::Fixed { value } => Ok(value),
            Self::Fraction { fraction } => scaled(fraction),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdversaryRule {
    #[default]
    None,
    /// `V_1 = {0, ..., v1_size - 1}`; the default size when omitted.
    Parity {
        #[serde(default)]
        v1_size: Option<usize>,
    },
    Greedy {
        #[serde(default)]
        threshold: ThresholdRule,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub epsilon: f64,
    pub trials: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub adversary: AdversaryRule,
    #[serde(default, flatten)]
    pub pipeline: PipelineConfig,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Per-trial matching and certificate files.
    #[serde(default)]
    pub artifacts_dir: Option<PathBuf>,
    /// When false, `runtime_ms` is written as 0 so outputs are reproducible
    /// byte for byte.
    #[serde(default = "default_true")]
    pub record_runtime: bool,
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, p: f64, epsilon: f64, trials: usize, base_seed: u64) -> Self {
        Self {
            n,
            k,
            p,
            epsilon,
            trials,
            base_seed,
            adversary: AdversaryRule::None,
            pipeline: PipelineConfig::default(),
            out: None,
            format: OutputFormat::Csv,
            artifacts_dir: None,
            record_runtime: true,
        }
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(ExperimentError::io(path))?;
        serde_json::from_reader(BufReader::new(file))
            .map_err(|source| ExperimentError::Json { path: path.to_path_buf(), source })
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if self.k < 2 {
            return bad(format!("k must be at least 2, got {}", self.k));
        }
        if self.n == 0 || !self.n.is_multiple_of(self.k) {
            return bad(format!("k = {} must divide n = {}", self.k, self.n));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return bad(format!("p must lie in [0, 1], got {}", self.p));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.pipeline.partition_retries == 0 || self.pipeline.pi_budget == 0 {
            return bad("partition_retries and pi_budget must be at least 1".into());
        }
        match self.adversary {
            AdversaryRule::Parity { v1_size: Some(s) } if s % 2 == 0 || s > self.n => {
                bad(format!("v1_size must be odd and at most n, got {s}"))
            }
            AdversaryRule::Greedy { threshold } => threshold.resolve(self.n, self.p, self.epsilon).map(drop),
            _ => Ok(()),
        }
    }

    /// Short label used in the `adversary` column.
    pub fn adversary_label(&self) -> String {
        match self.adversary {
            AdversaryRule::None => "none".into(),
            AdversaryRule::Parity { v1_size } => {
                format!("parity:{}", v1_size.unwrap_or_else(|| default_v1(self.n).len()))
            }
            AdversaryRule::Greedy { threshold } => {
                format!("greedy:{}", threshold.resolve(self.n, self.p, self.epsilon).unwrap_or(0))
            }
        }
    }
}

/// The CSV columns of one trial, in [`CSV_COLUMNS`] order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub epsilon: f64,
    pub adversary: String,
    pub edges_before: usize,
    pub edges_after: usize,
    pub residual_min_codegree: usize,
    pub partition_worst_deviation: f64,
    pub delta_star: usize,
    pub pi_attempts: usize,
    pub matched: bool,
    pub verified: bool,
    /// Empty iff `matched`.
    pub failure_stage: String,
    pub runtime_ms: f64,
}

/// JSON-only fields.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialDetails {
    pub partition_passed: bool,
    pub strategy_used: Option<PiStrategy>,
    pub matching: Option<HyperMatching>,
    pub certificate: Option<HallCertificate>,
    pub verdict: Option<MatchingVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    #[serde(flatten)]
    pub row: TrialRow,
    #[serde(flatten)]
    pub details: TrialDetails,
}

/// Runs one trial of `cfg`. Exposed for callers that want to inspect the
/// hypergraphs (see [`trial_instance`]).
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<ExperimentRecord, ExperimentError> {
    let start = Instant::now();
    let seed = RngSeed(mix(cfg.base_seed, trial as u64));
    let instance = trial_instance(cfg, trial)?;
    let (edges_before, h) = (instance.sampled.edge_count(), instance.attacked);
    let residual_min_codegree = instance.residual_min_codegree;

    let outcome = pipeline_find_pm(&h, cfg.epsilon, &cfg.pipeline, seed.derive(streams::PIPELINE))
        .map_err(|source| ExperimentError::Pipeline { trial, source })?;

    let (matched, verified, stage, deviation, delta_star, pi_attempts, details) = match outcome {
        PipelineOutcome::Matched(s) => {
            let verified = verify_perfect_matching(&h, &s.matching).is_perfect();
            let details = TrialDetails {
                partition_passed: s.partition_passed,
                strategy_used: Some(s.strategy_used),
                matching: Some(s.matching),
                certificate: None,
                verdict: None,
            };
            (verified, verified, String::new(), s.partition_worst_deviation, s.delta_star, s.pi_attempts, details)
        }
        PipelineOutcome::Failed(f) => {
            let details = TrialDetails {
                partition_passed: f.partition_passed,
                strategy_used: None,
                matching: None,
                certificate: f.certificate,
                verdict: f.verdict,
            };
            let stage = f.stage.as_str().to_string();
            (false, false, stage, f.partition_worst_deviation, f.delta_star, f.pi_attempts, details)
        }
    };
    let runtime_ms = if cfg.record_runtime { (start.elapsed().as_secs_f64() * 1e6).round() / 1e3 } else { 0.0 };
    let row = TrialRow {
        trial,
        seed: seed.0,
        n: cfg.n,
        k: cfg.k,
        p: cfg.p,
        epsilon: cfg.epsilon,
        adversary: cfg.adversary_label(),
        edges_before,
        edges_after: h.edge_count(),
        residual_min_codegree,
        partition_worst_deviation: deviation,
        delta_star,
        pi_attempts,
        matched,
        verified,
        failure_stage: if matched { String::new() } else if stage.is_empty() { "verification".into() } else { stage },
        runtime_ms,
    };
    Ok(ExperimentRecord { row, details })
}

/// One trial's input before and after the adversary.
#[derive(Clone, Debug)]
pub struct TrialInstance {
    pub sampled: Hypergraph,
    pub attacked: Hypergraph,
    pub residual_min_codegree: usize,
}

/// The sampled hypergraph of `trial` and the adversary's output on it.
pub fn trial_instance(cfg: &ExperimentConfig, trial: usize) -> Result<TrialInstance, ExperimentError> {
    let seed = RngSeed(mix(cfg.base_seed, trial as u64));
    let sampled = sample_hypergraph(cfg.n, cfg.k, cfg.p, seed.derive(streams::SAMPLE))
        .map_err(|source| ExperimentError::Sampling { trial, source })?;
    let outcome = match cfg.adversary {
        AdversaryRule::None => {
            let residual_min_codegree = sampled.min_max_codegree().0;
            return Ok(TrialInstance { attacked: sampled.clone(), sampled, residual_min_codegree });
        }
        AdversaryRule::Parity { v1_size } => {
            let v1: Vec<usize> = (0..v1_size.unwrap_or_else(|| default_v1(cfg.n).len())).collect();
            parity_adversary(&sampled, Some(&v1)).map_err(|source| ExperimentError::Adversary { trial, source })?
        }
        AdversaryRule::Greedy { threshold } => {
            let t = threshold.resolve(cfg.n, cfg.p, cfg.epsilon)?;
            greedy_budget_adversary(&sampled, t, seed.derive(streams::ADVERSARY))
        }
    };
    Ok(TrialInstance { sampled, attacked: outcome.result, residual_min_codegree: outcome.residual_min_codegree })
}

/// All trials of `cfg`, in trial order. Writes `cfg.out` and artifacts if set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    cfg.validate()?;
    let records = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect::<Result<Vec<_>, _>>()?;
    if let Some(dir) = &cfg.artifacts_dir {
        write_artifacts(dir, &records)?;
    }
    if let Some(path) = &cfg.out {
        write_records(path, cfg.format, &records)?;
    }
    Ok(records)
}

/// `trial_NNNNN.matching` for matched trials, `trial_NNNNN.failure.json`
/// (certificate and verdict) otherwise.
pub fn write_artifacts(dir: &Path, records: &[ExperimentRecord]) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir).map_err(ExperimentError::io(dir))?;
    for r in records {
        let stem = format!("trial_{:05}", r.row.trial);
        if let Some(m) = &r.details.matching {
            let path = dir.join(format!("{stem}.matching"));
            std::fs::write(&path, m.to_text()).map_err(ExperimentError::io(&path))?;
        } else {
            let path = dir.join(format!("{stem}.failure.json"));
            let body = serde_json::json!({
                "failure_stage": r.row.failure_stage,
                "certificate": r.details.certificate,
                "verdict": r.details.verdict,
            });
            let text = serde_json::to_string_pretty(&body).expect("json value");
            std::fs::write(&path, text).map_err(ExperimentError::io(&path))?;
        }
    }
    Ok(())
}

pub fn to_csv_string(records: &[ExperimentRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_csv_rows(&mut w, records).expect("in-memory csv");
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}

fn write_csv_rows<W: Write>(w: &mut csv::Writer<W>, records: &[ExperimentRecord]) -> Result<(), csv::Error> {
    if records.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in records {
        w.serialize(&r.row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json_string(records: &[ExperimentRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn write_records(path: &Path, format: OutputFormat, records: &[ExperimentRecord]) -> Result<(), ExperimentError> {
    let file = File::create(path).map_err(ExperimentError::io(path))?;
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(BufWriter::new(file));
            write_csv_rows(&mut w, records).map_err(|source| ExperimentError::Csv { path: path.to_path_buf(), source })
        }
        OutputFormat::Json => {
            let mut w = BufWriter::new(file);
            w.write_all(to_json_string(records).as_bytes()).map_err(ExperimentError::io(path))?;
            w.write_all(b"\n").map_err(ExperimentError::io(path))?;
            w.flush().map_err(ExperimentError::io(path))
        }
    }
}

/// Rows of a CSV written by [`write_records`]; JSON-only details are empty.
pub fn read_csv(path: &Path) -> Result<Vec<TrialRow>, ExperimentError> {
    let csv_err = |source| ExperimentError::Csv { path: path.to_path_buf(), source };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = reader.headers().map_err(csv_err)?.clone();
    if !header.iter().eq(CSV_COLUMNS.iter().copied()) {
        return Err(ExperimentError::Config(format!("{}: unexpected CSV header", path.display())));
    }
    reader.deserialize().collect::<Result<_, _>>().map_err(csv_err)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub matched: usize,
    pub verified: usize,
    /// `matched / trials`, rounded to 6 decimal places.
    pub success_rate: f64,
    pub mean_pi_attempts: f64,
    pub runtime_ms_p50: f64,
    pub runtime_ms_p90: f64,
    pub runtime_ms_max: f64,
}

pub fn summarize<'a>(rows: impl IntoIterator<Item = &'a TrialRow>) -> Result<Summary, ExperimentError> {
    let rows: Vec<&TrialRow> = rows.into_iter().collect();
    if rows.is_empty() {
        return Err(ExperimentError::EmptyRecords);
    }
    let trials = rows.len();
    let matched = rows.iter().filter(|r| r.matched).count();
    let verified = rows.iter().filter(|r| r.verified).count();
    let mean_pi_attempts = rows.iter().map(|r| r.pi_attempts as f64).sum::<f64>() / trials as f64;
    let mut runtimes: Vec<f64> = rows.iter().map(|r| r.runtime_ms).collect();
    runtimes.sort_by(f64::total_cmp);
    // Nearest-rank quantile.
    let quantile = |q: f64| runtimes[((q * trials as f64).ceil() as usize).clamp(1, trials) - 1];
    Ok(Summary {
        trials,
        matched,
        verified,
        success_rate: (matched as f64 / trials as f64 * 1e6).round() / 1e6,
        mean_pi_attempts,
        runtime_ms_p50: quantile(0.5),
        runtime_ms_p90: quantile(0.9),
        runtime_ms_max: runtimes[trials - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deterministic(mut cfg: ExperimentConfig) -> ExperimentConfig {
        cfg.record_runtime = false;
        cfg
    }

    #[test]
    fn complete_graphs_always_match() {
        let cfg = deterministic(ExperimentConfig::new(6, 3, 1.0, 0.2, 3, 7));
        let records = run_experiment(&cfg).unwrap();
        assert_eq!(records.len(), 3);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.row.trial, i);
            assert!(r.row.matched && r.row.verified);
            assert!(r.row.failure_stage.is_empty());
            assert_eq!(r.row.edges_before, 20);
        }
    }

    #[test]
    fn parity_never_matches() {
        let mut cfg = deterministic(ExperimentConfig::new(9, 3, 1.0, 0.2, 4, 1));
        cfg.adversary = AdversaryRule::Parity { v1_size: None };
        cfg.pipeline.pi_budget = 10;
        cfg.pipeline.partition_retries = 3;
        for r in run_experiment(&cfg).unwrap() {
            assert!(!r.row.matched && !r.row.verified);
            assert_eq!(r.row.failure_stage, "pi_search");
            assert!(r.details.certificate.is_some());
            assert_eq!(r.row.adversary, "parity:5");
        }
    }

    #[test]
    fn identical_configs_give_identical_csv() {
        let mut cfg = deterministic(ExperimentConfig::new(12, 3, 0.7, 0.2, 6, 99));
        cfg.adversary = AdversaryRule::Greedy { threshold: ThresholdRule::Fraction { fraction: 0.5 } };
        let a = to_csv_string(&run_experiment(&cfg).unwrap());
        let b = to_csv_string(&run_experiment(&cfg).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.lines().next().unwrap(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn thresholds_resolve() {
        assert_eq!(ThresholdRule::Theorem.resolve(60, 0.5, 0.2).unwrap(), 21);
        assert_eq!(ThresholdRule::Fraction { fraction: 0.7 }.resolve(60, 0.5, 0.2).unwrap(), 21);
        assert_eq!(ThresholdRule::Theorem.resolve(60, 0.5, 0.21).unwrap(), 22);
        assert_eq!(ThresholdRule::Fixed { value: 4 }.resolve(6, 1.0, 0.2).unwrap(), 4);
        assert!(ThresholdRule::Fraction { fraction: -1.0 }.resolve(6, 1.0, 0.2).is_err());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(ExperimentConfig::new(7, 3, 0.5, 0.2, 1, 0).validate().is_err());
        assert!(ExperimentConfig::new(6, 3, 1.5, 0.2, 1, 0).validate().is_err());
        assert!(ExperimentConfig::new(6, 3, 0.5, 0.2, 0, 0).validate().is_err());
        let mut cfg = ExperimentConfig::new(6, 3, 0.5, 0.2, 1, 0);
        cfg.adversary = AdversaryRule::Parity { v1_size: Some(2) };
        assert!(cfg.validate().is_err());
    }

    fn row(matched: bool, pi: usize, runtime: f64) -> TrialRow {
        TrialRow {
            trial: 0,
            seed: 0,
            n: 6,
            k: 3,
            p: 1.0,
            epsilon: 0.1,
            adversary: "none".into(),
            edges_before: 0,
            edges_after: 0,
            residual_min_codegree: 0,
            partition_worst_deviation: 0.0,
            delta_star: 0,
            pi_attempts: pi,
            matched,
            verified: matched,
            failure_stage: if matched { String::new() } else { "pi_search".into() },
            runtime_ms: runtime,
        }
    }

    #[test]
    fn summary_examples() {
        let rows: Vec<TrialRow> = (0..100).map(|i| row(i < 93, 1 + i % 3, i as f64)).collect();
        let s = summarize(&rows).unwrap();
        assert_eq!(s.success_rate, 0.93);
        assert_eq!((s.runtime_ms_p50, s.runtime_ms_p90, s.runtime_ms_max), (49.0, 89.0, 99.0));
        let all: Vec<TrialRow> = (0..7).map(|_| row(true, 1, 0.0)).collect();
        assert_eq!(summarize(&all).unwrap().success_rate, 1.0);
        let third: Vec<TrialRow> = (0..3).map(|i| row(i == 0, 1, 0.0)).collect();
        assert_eq!(summarize(&third).unwrap().success_rate, 0.333333);
        assert!(matches!(summarize(&[]), Err(ExperimentError::EmptyRecords)));
    }

    #[test]
    fn csv_roundtrip_preserves_summary() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::new(9, 3, 0.8, 0.2, 5, 3);
        cfg.out = Some(dir.path().join("out.csv"));
        cfg.artifacts_dir = Some(dir.path().join("art"));
        let records = run_experiment(&cfg).unwrap();
        let rows = read_csv(cfg.out.as_ref().unwrap()).unwrap();
        assert_eq!(rows, records.iter().map(|r| r.row.clone()).collect::<Vec<_>>());
        assert_eq!(summarize(&rows).unwrap(), summarize(records.iter().map(|r| &r.row)).unwrap());
        assert_eq!(std::fs::read_dir(dir.path().join("art")).unwrap().count(), 5);
    }

    #[test]
    fn config_json_roundtrip() {
        let json = r#"{"n": 60, "k": 3, "p": 0.5, "epsilon": 0.2, "trials": 10, "base_seed": 2024,
            "adversary": {"kind": "greedy"}, "strategy": "full-random", "pi_budget": 200}"#;
        let cfg: ExperimentConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.adversary, AdversaryRule::Greedy { threshold: ThresholdRule::Theorem });
        assert_eq!(cfg.pipeline.strategy, PiStrategy::FullRandom);
        assert_eq!(cfg.pipeline.partition_retries, 50);
        assert!(cfg.record_runtime);
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
