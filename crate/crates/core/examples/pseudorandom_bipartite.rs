// Exact pseudorandomness checks on small random bipartite graphs, and the
// perfect matchings they guarantee.

use hypermatch::reduction::CheckMode;
use hypermatch::{is_pseudorandom, max_matching, BipartiteGraph, RngSeed};
use rand::Rng;

pub fn run_example() -> anyhow::Result<()> {
    let (m, p, eps) = (12, 0.8, 0.2);
    let mut rng = RngSeed(5).rng();
    let (mut accepted, mut matched) = (0, 0);
    for _ in 0..200 {
        let adjacency = (0..m).map(|_| (0..m).filter(|_| rng.gen::<f64>() < p).collect()).collect();
        let g = BipartiteGraph::new(m, adjacency)?;
        let verdict = is_pseudorandom(&g, eps, p, CheckMode::Exact)?;
        if verdict.certified() {
            accepted += 1;
            matched += usize::from(max_matching(&g).is_perfect());
        }
    }
    println!("{accepted} of 200 graphs are ({eps}, {p})-pseudorandom; {matched} of those have a perfect matching");
    assert_eq!(accepted, matched);

    let sparse = BipartiteGraph::from_text("3\n0\n0\n0\n")?;
    let verdict = is_pseudorandom(&sparse, eps, 1.0, CheckMode::Exact)?;
    println!("star graph fails property {:?}: {:?}", verdict.failed_property, verdict.witness);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
