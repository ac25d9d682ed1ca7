// A short Monte Carlo run at the co-degree threshold, written as CSV.

use hypermatch::experiment::{read_csv, run_experiment, summarize, AdversaryRule, ExperimentConfig, ThresholdRule};

pub fn run_example() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join(format!("hypermatch-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut cfg = ExperimentConfig::new(30, 3, 0.6, 0.2, 8, 2024);
    cfg.adversary = AdversaryRule::Greedy { threshold: ThresholdRule::Theorem };
    cfg.out = Some(dir.join("trials.csv"));

    let records = run_experiment(&cfg)?;
    for r in &records {
        println!(
            "trial {}: {} -> {} edges, residual {}, matched {} after {} attempts",
            r.row.trial, r.row.edges_before, r.row.edges_after, r.row.residual_min_codegree, r.row.matched, r.row.pi_attempts
        );
    }
    let summary = summarize(&read_csv(cfg.out.as_ref().expect("set above"))?)?;
    println!("success rate {} over {} trials", summary.success_rate, summary.trials);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
