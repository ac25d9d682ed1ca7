// Closed-form tail bounds next to exact binomial tails.

use hypermatch::concentration::{binomial_tail_bound_checked, binomial_upper_tail, chernoff_bounds, mcdiarmid_bound};

pub fn run_example() -> anyhow::Result<()> {
    let (n, q) = (30u64, 0.4);
    let mu = n as f64 * q;
    println!("Bin({n}, {q}), mu = {mu}");
    for a in [0.25, 0.5, 1.0] {
        let t = chernoff_bounds(a, mu)?;
        let hi = ((1.0 + a) * mu).floor() as u64 + 1;
        let exact_upper = binomial_upper_tail(n, q, hi);
        let upper = t.upper.map_or("n/a".to_string(), |b| format!("{:.3e}", b.value));
        println!("  a = {a}: P(X > (1+a)mu) = {exact_upper:.3e} <= {upper}, lower tail bound {:.3e}", t.lower.value);
    }
    let sparse = 0.05;
    println!("Bin({n}, {sparse})");
    for k in [3u64, 6, 10] {
        let c = binomial_tail_bound_checked(n, sparse, k)?;
        let note = if c.bound.is_vacuous() { " (vacuous)" } else { "" };
        println!("  P(X >= {k}) = {:.3e} <= (e n q / k)^k = {:.3e}{note}", c.exact, c.bound.value);
    }
    let b = mcdiarmid_bound(80.0, 1.0, 1.0, 100.0)?;
    println!("McDiarmid, t = 80, r = c = 1, median 100: {:.4}", b.value);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
