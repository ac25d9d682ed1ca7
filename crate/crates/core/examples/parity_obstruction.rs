// The parity construction: co-degrees stay near `np / 2` yet no perfect
// matching survives.

use hypermatch::adversary::default_v1;
use hypermatch::{count_pms, parity_adversary, Hypergraph};

pub fn run_example() -> anyhow::Result<()> {
    for n in [6, 9, 12] {
        let h = Hypergraph::complete(n, 3)?;
        let out = parity_adversary(&h, None)?;
        println!(
            "n = {n:2}: |V_1| = {}, kept {} of {} edges, residual min co-degree {}, perfect matchings {} -> {}",
            default_v1(n).len(),
            out.result.edge_count(),
            h.edge_count(),
            out.residual_min_codegree,
            count_pms(&h)?,
            count_pms(&out.result)?,
        );
        assert_eq!(count_pms(&out.result)?, 0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
