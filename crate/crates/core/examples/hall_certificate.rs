// Maximum matching and a Hall violator for a bipartite graph without a
// perfect matching.

use hypermatch::reduction::{hall_certificate_on, Side};
use hypermatch::{hall_certificate, max_matching, BipartiteGraph};

pub fn run_example() -> anyhow::Result<()> {
    // Rows 0 and 1 both only see column 0.
    let g = BipartiteGraph::from_text("4\n0\n0\n1 2\n2 3\n")?;
    let m = max_matching(&g);
    println!("maximum matching of size {}: {:?}", m.size(), m.pairs().collect::<Vec<_>>());

    let left = hall_certificate(&g)?;
    println!("left violator {:?} sees only {:?}", left.vertices, left.neighborhood);
    assert!(left.is_valid_for(&g));

    let right = hall_certificate_on(&g, Side::Right)?;
    println!("right violator {:?} sees only {:?}", right.vertices, right.neighborhood);

    assert!(hall_certificate(&BipartiteGraph::complete(4)).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
