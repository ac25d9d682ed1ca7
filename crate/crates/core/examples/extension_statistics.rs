// The degree of a fixed right vertex of `B_pi` when only `pi_1` is random:
// exact law for small `m`, sampled median for large `m`.

use hypermatch::concentration::{extension_stats_empirical, extension_stats_exact, ExactMoments, ExtensionMatrix};
use hypermatch::RngSeed;

pub fn run_example() -> anyhow::Result<()> {
    let small = ExtensionMatrix::random(6, 0.5, RngSeed(11))?;
    let exact = extension_stats_exact(&small, Some(0.5))?;
    let moments = exact.exact.as_ref().expect("exact mode");
    println!(
        "m = 6: mean {} (d_v/m = {}), variance {} <= {:.3}, distribution {:?}",
        moments.mean,
        ExactMoments::expected_mean(&small),
        moments.variance,
        exact.variance_bound,
        moments.distribution
    );

    let large = ExtensionMatrix::random(1000, 0.5, RngSeed(12))?;
    let stats = extension_stats_empirical(&large, 2000, RngSeed(13), Some(0.05))?;
    println!(
        "m = 1000: mu {:.2}, sample mean {:.2}, median {}, variance {:.2} (bound {:.2}), within 5%: {:?}",
        stats.mu, stats.mean, stats.median, stats.variance, stats.variance_bound, stats.containment
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
