use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypermatch::adversary::{greedy_budget_adversary, parity_adversary};
use hypermatch::concentration::{extension_stats_empirical, extension_stats_exact, ExtensionMatrix};
use hypermatch::experiment::{
    run_experiment, summarize, AdversaryRule, ExperimentConfig, OutputFormat, ThresholdRule,
};
use hypermatch::randgen::{sample_hypergraph_with, verify_partition, SamplingMode};
use hypermatch::reduction::{hall_certificate, max_matching, BipartiteGraph, PipelineConfig, PipelineOutcome};
use hypermatch::{pipeline_find_pm, sample_balanced_partition, Hypergraph, PiStrategy, RngSeed};

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Perfect matchings in random k-uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample H^k_{n,p} and write it in the edge-list format.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Draw the edge count first; faster for small p.
        #[arg(long)]
        sparse: bool,
    },
    /// Draw a balanced partition and report how evenly it splits co-degrees.
    Partition {
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of parts; must equal the uniformity of the input.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        alpha: f64,
    },
    /// Delete edges with the parity or greedy adversary.
    Adversary {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: AdversaryMode,
        #[arg(long)]
        v1_size: Option<usize>,
        #[arg(long)]
        threshold: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a perfect matching via a partition and B_pi.
    Pipeline {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        knobs: PipelineKnobs,
        /// Matching (one edge per line) on success, failure report JSON otherwise.
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximum matching and Hall certificate of a bipartite graph file.
    Match {
        #[arg(long)]
        bipartite: PathBuf,
    },
    /// Statistics of d_{B_pi}(v) for an extension matrix.
    Stats {
        #[arg(long, value_enum)]
        mode: StatsModeArg,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Seeded Monte Carlo trials.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AdversaryMode {
    Parity,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsModeArg {
    Exact,
    Empirical,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    #[value(alias = "pi1-only")]
    Pi1,
    #[value(alias = "full-random")]
    Full,
    Fallback,
}

impl From<StrategyArg> for PiStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Pi1 => PiStrategy::Pi1Only,
            StrategyArg::Full => PiStrategy::FullRandom,
            StrategyArg::Fallback => PiStrategy::Fallback,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentAdversary {
    None,
    Parity,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct PipelineKnobs {
    #[arg(long)]
    partition_retries: Option<usize>,
    #[arg(long)]
    pi_budget: Option<usize>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
}

impl PipelineKnobs {
    fn apply(&self, mut cfg: PipelineConfig) -> PipelineConfig {
        if let Some(r) = self.partition_retries {
            cfg.partition_retries = r;
        }
        if let Some(b) = self.pi_budget {
            cfg.pi_budget = b;
        }
        if let Some(s) = self.strategy {
            cfg.strategy = s.into();
        }
        cfg
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    adversary: Option<ExperimentAdversary>,
    #[arg(long)]
    v1_size: Option<usize>,
    /// Fixed greedy threshold; defaults to ceil((1/2 + epsilon) n p).
    #[arg(long)]
    threshold: Option<usize>,
    #[command(flatten)]
    knobs: PipelineKnobs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    artifacts_dir: Option<PathBuf>,
    /// Write 0 in the runtime_ms column.
    #[arg(long)]
    no_runtime: bool,
}

impl ExperimentArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => {
                let need = |name: &str| anyhow::anyhow!("--{name} is required without --config");
                ExperimentConfig::new(
                    self.n.ok_or_else(|| need("n"))?,
                    self.k.ok_or_else(|| need("k"))?,
                    self.p.ok_or_else(|| need("p"))?,
                    self.epsilon.ok_or_else(|| need("epsilon"))?,
                    self.trials.ok_or_else(|| need("trials"))?,
                    self.seed.unwrap_or(0),
                )
            }
        };
        macro_rules! set {
            ($($field:ident <- $value:expr),*) => { $(if let Some(v) = $value { cfg.$field = v; })* };
        }
        set!(n <- self.n, k <- self.k, p <- self.p, epsilon <- self.epsilon, trials <- self.trials,
             base_seed <- self.seed);
        if let Some(a) = self.adversary {
            cfg.adversary = match a {
                ExperimentAdversary::None => AdversaryRule::None,
                ExperimentAdversary::Parity => AdversaryRule::Parity { v1_size: self.v1_size },
                ExperimentAdversary::Greedy => AdversaryRule::Greedy {
                    threshold: self.threshold.map_or(ThresholdRule::Theorem, |value| ThresholdRule::Fixed { value }),
                },
            };
        }
        cfg.pipeline = self.knobs.apply(cfg.pipeline);
        if let Some(out) = self.out {
            cfg.out = Some(out);
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
        }
        if let Some(dir) = self.artifacts_dir {
            cfg.artifacts_dir = Some(dir);
        }
        if self.no_runtime {
            cfg.record_runtime = false;
        }
        Ok(cfg)
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    Hypergraph::read_file(path).with_context(|| format!("reading {}", path.display()))
}

fn read_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_string(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { n, k, p, seed, out, sparse } => {
            let mode = if sparse { SamplingMode::Sparse } else { SamplingMode::Enumerate };
            let h = sample_hypergraph_with(n, k, p, RngSeed(seed), mode)?;
            h.write_file(&out).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("{} edges", h.edge_count());
        }
        Command::Partition { input, k, seed, alpha } => {
            let h = read_hypergraph(&input)?;
            let parts = k.unwrap_or(h.k());
            if parts != h.k() {
                bail!("--k {parts} differs from the input uniformity {}", h.k());
            }
            let partition = sample_balanced_partition(h.n(), parts, RngSeed(seed))?;
            print_json(&verify_partition(&h, &partition, alpha)?)?;
        }
        Command::Adversary { input, mode, v1_size, threshold, seed, out } => {
            let h = read_hypergraph(&input)?;
            let outcome = match mode {
                AdversaryMode::Parity => {
                    let v1: Option<Vec<usize>> = v1_size.map(|s| (0..s).collect());
                    parity_adversary(&h, v1.as_deref())?
                }
                AdversaryMode::Greedy => {
                    let t = threshold.context("--threshold is required for --mode greedy")?;
                    greedy_budget_adversary(&h, t, RngSeed(seed))
                }
            };
            outcome.result.write_file(&out).with_context(|| format!("writing {}", out.display()))?;
            print_json(&outcome.summary())?;
        }
        Command::Pipeline { input, epsilon, seed, knobs, out } => {
            let h = read_hypergraph(&input)?;
            let cfg = knobs.apply(PipelineConfig::default());
            match pipeline_find_pm(&h, epsilon, &cfg, RngSeed(seed))? {
                PipelineOutcome::Matched(s) => {
                    write_string(&out, &s.matching.to_text())?;
                    eprintln!("perfect matching with {} edges after {} attempts", s.matching.len(), s.pi_attempts);
                }
                PipelineOutcome::Failed(f) => {
                    write_string(&out, &serde_json::to_string_pretty(&f)?)?;
                    eprintln!("no perfect matching found ({})", f.stage.as_str());
                }
            }
        }
        Command::Match { bipartite } => {
            let g = BipartiteGraph::from_text(&read_string(&bipartite)?)?;
            let m = max_matching(&g);
            let pairs: Vec<(usize, usize)> = m.pairs().collect();
            let certificate = hall_certificate(&g).ok();
            print_json(&serde_json::json!({
                "m": g.m(),
                "size": m.size(),
                "perfect": m.is_perfect(),
                "matching": pairs,
                "certificate": certificate,
            }))?;
        }
        Command::Stats { mode, matrix, samples, seed, alpha } => {
            let e = ExtensionMatrix::from_text(&read_string(&matrix)?)?;
            let stats = match mode {
                StatsModeArg::Exact => extension_stats_exact(&e, alpha)?,
                StatsModeArg::Empirical => extension_stats_empirical(&e, samples, RngSeed(seed), alpha)?,
            };
            print_json(&stats)?;
        }
        Command::Experiment(args) => {
            let cfg = args.into_config()?;
            let records = run_experiment(&cfg)?;
            print_json(&summarize(records.iter().map(|r| &r.row))?)?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
