// Sample `H^3_{30, 0.5}`, look at its co-degrees, and split it into three
// balanced parts.

use hypermatch::randgen::{check_codegree_concentration, verify_partition};
use hypermatch::{sample_balanced_partition, sample_hypergraph, RngSeed};

pub fn run_example() -> anyhow::Result<()> {
    let (n, k, p) = (30, 3, 0.5);
    let h = sample_hypergraph(n, k, p, RngSeed(17))?;
    let (min, max) = h.min_max_codegree();
    println!("{} edges, co-degrees in [{min}, {max}], np = {}", h.edge_count(), n as f64 * p);
    assert_eq!(h.codegree_sum(), k * h.edge_count());

    let conc = check_codegree_concentration(&h, p, 0.6);
    println!("co-degrees within (1 ± 0.6) np: {}", conc.holds);

    let partition = sample_balanced_partition(n, k, RngSeed(4))?;
    let report = verify_partition(&h, &partition, 0.5)?;
    println!(
        "partition worst deviation {:.3}, {} violations at alpha = 0.5",
        report.worst_deviation,
        report.violations.len()
    );

    let hp = h.induce_kpartite(&partition)?;
    println!("k-partite part: {} edges, delta* = {}", hp.hypergraph().edge_count(), hp.delta_star());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
