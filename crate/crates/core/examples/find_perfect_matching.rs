// End to end: sample, let the greedy adversary strip edges down to the
// co-degree threshold, then recover a perfect matching.

use hypermatch::{
    greedy_budget_adversary, pipeline_find_pm, sample_hypergraph, verify_perfect_matching, PiStrategy,
    PipelineConfig, PipelineOutcome, RngSeed,
};

pub fn run_example() -> anyhow::Result<()> {
    let (n, k, p, eps) = (45, 3, 0.6, 0.2);
    let h = sample_hypergraph(n, k, p, RngSeed(1))?;
    let threshold = ((0.5 + eps) * n as f64 * p).ceil() as usize;
    let attacked = greedy_budget_adversary(&h, threshold, RngSeed(2));
    println!(
        "greedy adversary at threshold {threshold}: {} -> {} edges, residual min co-degree {}",
        h.edge_count(),
        attacked.result.edge_count(),
        attacked.residual_min_codegree
    );

    let cfg = PipelineConfig { strategy: PiStrategy::FullRandom, ..PipelineConfig::default() };
    match pipeline_find_pm(&attacked.result, eps, &cfg, RngSeed(3))? {
        PipelineOutcome::Matched(s) => {
            assert!(verify_perfect_matching(&attacked.result, &s.matching).is_perfect());
            println!("matched after {} permutation attempts (delta* = {}):", s.pi_attempts, s.delta_star);
            print!("{}", s.matching.to_text());
        }
        PipelineOutcome::Failed(f) => println!("no matching: {:?} after {} attempts", f.stage, f.pi_attempts),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
