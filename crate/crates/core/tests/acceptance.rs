//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use hypermatch::concentration::{
    binomial_tail_bound, chernoff_bounds, extension_stats_empirical, extension_stats_exact, ExtensionMatrix,
};
use hypermatch::experiment::{
    run_experiment, to_csv_string, trial_instance, AdversaryRule, ExperimentConfig, ThresholdRule,
};
use hypermatch::reduction::{CheckMode, EXACT_MAX_M};
use hypermatch::{
    count_pms, hall_certificate, is_pseudorandom, max_matching, parity_adversary, sample_hypergraph,
    verify_perfect_matching, BipartiteGraph, Hypergraph, PiStrategy, RngSeed,
};
use itertools::Itertools;
use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Exhaustive over all `2^{m^2}` graphs for `m <= 3`.
fn hall_equivalence() -> Outcome {
    let mut literal_counterexamples = 0;
    let mut graphs = 0u64;
    for m in 1..=3usize {
        for bits in 0u64..1 << (m * m) {
            graphs += 1;
            let g = common::graph_from_bits(m, bits);
            let perfect = common::has_perfect_matching_by_permutation(&g);
            // Odd m needs the rounded-up size bound; the floor is shown below.
            let conditions = common::hall_conditions_hold(&g, m.div_ceil(2));
            ensure(perfect == conditions, || format!("m={m} bits={bits:#b}: pm={perfect} conditions={conditions}"))?;
            ensure(max_matching(&g).is_perfect() == perfect, || format!("m={m} bits={bits:#b}: matching disagrees"))?;
            if perfect != common::hall_conditions_hold(&g, m / 2) {
                literal_counterexamples += 1;
            }
            if !perfect {
                let cert = hall_certificate(&g).map_err(|e| e.to_string())?;
                let recomputed = g.neighborhood(cert.side, &cert.vertices);
                ensure(recomputed.len() < cert.vertices.len() && recomputed == cert.neighborhood, || {
                    format!("m={m} bits={bits:#b}: invalid certificate {cert:?}")
                })?;
            }
        }
    }
    Ok(format!(
        "{graphs} graphs, 0 exceptions with |X| <= ceil(m/2); floor(m/2) bound has {literal_counterexamples} counterexamples at odd m"
    ))
}

fn matching_oracle() -> Outcome {
    let mut rng = RngSeed(0xacce_0002).rng();
    for case in 0..1000 {
        let m = rng.gen_range(1..=8);
        let density = [0.2, 0.5, 0.8][case % 3];
        let adjacency = (0..m).map(|_| (0..m).filter(|_| rng.gen::<f64>() < density).collect()).collect();
        let g = BipartiteGraph::new(m, adjacency).map_err(|e| e.to_string())?;
        let mm = max_matching(&g);
        ensure(mm.is_valid_for(&g), || format!("case {case}: invalid matching"))?;
        let expected = common::brute_max_matching(&g);
        ensure(mm.size() == expected, || format!("case {case}: size {} vs exhaustive {expected}", mm.size()))?;
    }
    Ok("1000 graphs, 0 exceptions".into())
}

/// Rows `n,input,sample,edges_before,edges_after,residual_min_codegree,perfect_matchings`.
fn parity_rows() -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "input", "sample", "edges_before", "edges_after", "residual_min_codegree", "perfect_matchings"])
        .map_err(|e| e.to_string())?;
    for n in [6usize, 9, 12] {
        let mut inputs = vec![("complete".to_string(), Hypergraph::complete(n, 3).map_err(|e| e.to_string())?)];
        for s in 0..20u64 {
            let h = sample_hypergraph(n, 3, 0.8, RngSeed(1000 * n as u64 + s)).map_err(|e| e.to_string())?;
            inputs.push((format!("sample:{s}"), h));
        }
        for (label, h) in inputs {
            let out = parity_adversary(&h, None).map_err(|e| e.to_string())?;
            let pms = count_pms(&out.result).map_err(|e| e.to_string())?;
            let naive = common::naive_count_pms(&out.result);
            ensure(pms == 0 && naive == 0, || format!("n={n} {label}: {pms} perfect matchings survive"))?;
            w.write_record([
                n.to_string(),
                label.clone(),
                label.strip_prefix("sample:").unwrap_or("-").to_string(),
                h.edge_count().to_string(),
                out.result.edge_count().to_string(),
                out.residual_min_codegree.to_string(),
                pms.to_string(),
            ])
            .map_err(|e| e.to_string())?;
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn parity_soundness(csv_out: &mut Option<String>) -> Outcome {
    let csv = parity_rows()?;
    let rows = csv.lines().count() - 1;
    let h = Hypergraph::complete(12, 3).map_err(|e| e.to_string())?;
    let out = parity_adversary(&h, None).map_err(|e| e.to_string())?;
    let floor = (0.5 - 0.25) * 12.0;
    ensure(out.residual_min_codegree as f64 >= floor, || format!("residual {} < {floor}", out.residual_min_codegree))?;
    *csv_out = Some(csv);
    Ok(format!("{rows} inputs, all without perfect matchings; n=12 residual {} >= {floor}", out.residual_min_codegree))
}

fn exact_law(e: &ExtensionMatrix) -> (Ratio<i128>, Ratio<i128>) {
    let m = e.m();
    let values: Vec<i128> = (0..m).permutations(m).map(|perm| e.degree_under(&perm) as i128).collect();
    let q = values.len() as i128;
    let mean = Ratio::new(values.iter().sum(), q);
    let second = Ratio::new(values.iter().map(|v| v * v).sum(), q);
    (mean, second - mean * mean)
}

fn extension_statistics() -> Outcome {
    let mut rng = RngSeed(0xacce_0004).rng();
    for case in 0..500u64 {
        let m = 3 + (case % 5) as usize;
        let density = rng.gen_range(0.05..0.95);
        let member: Vec<Vec<bool>> = (0..m).map(|_| (0..m).map(|_| rng.gen::<f64>() < density).collect()).collect();
        let ones = member.iter().flatten().filter(|&&b| b).count() as i128;
        let e = ExtensionMatrix::new(member).map_err(|err| err.to_string())?;
        let stats = extension_stats_exact(&e, None).map_err(|err| err.to_string())?;
        let exact = stats.exact.as_ref().ok_or("exact moments missing")?;
        let mu = Ratio::new(ones, m as i128);
        ensure(exact.mean == mu, || format!("case {case}: mean {} vs d_v/m {mu}", exact.mean))?;
        let (mean, variance) = exact_law(&e);
        ensure(exact.mean == mean && exact.variance == variance, || format!("case {case}: moments disagree with oracle"))?;
        let bound = mu + Ratio::from_integer(2) * mu * mu / Ratio::from_integer(m as i128 - 1);
        ensure(exact.variance <= bound, || format!("case {case}: variance {} > bound {bound}", exact.variance))?;
    }
    let big = ExtensionMatrix::random(1000, 0.5, RngSeed(0xacce_1000)).map_err(|e| e.to_string())?;
    let stats = extension_stats_empirical(&big, 2000, RngSeed(0xacce_2000), Some(0.7)).map_err(|e| e.to_string())?;
    let med = stats.median as f64;
    ensure(stats.containment == Some(true) && (0.3 * stats.mu..=1.7 * stats.mu).contains(&med), || {
        format!("median {med} outside (1 ± 0.7) mu = {}", stats.mu)
    })?;
    let soft = (med - stats.mu).abs() <= 0.05 * stats.mu;
    Ok(format!(
        "500 exact cases; m=1000: mu {:.2}, median {}, within 5%: {soft} (reported only)",
        stats.mu, stats.median
    ))
}

/// `bound >= exact`, allowing one part in 10^12 of rounding in the summed tail.
fn dominates(bound: f64, exact: f64) -> bool {
    bound >= exact - 1e-12 * exact.max(1e-300)
}

fn bound_validity() -> Outcome {
    let mut checks = 0u64;
    for n in 1..=30usize {
        for step in 1..=9 {
            let q = step as f64 / 10.0;
            let pmf = common::binomial_pmf(n, q);
            let mu = n as f64 * q;
            // P(X >= t) for every t.
            let upper: Vec<f64> = (0..=n + 1).map(|t| pmf.iter().skip(t).sum()).collect();
            for k in 1..=n as u64 {
                let b = binomial_tail_bound(n as u64, q, k).map_err(|e| e.to_string())?;
                let raw = (std::f64::consts::E * n as f64 * q / k as f64).powf(k as f64);
                ensure(b.value == raw && b.is_vacuous() == (raw >= 1.0), || format!("n={n} q={q} k={k}: clamped"))?;
                ensure(dominates(b.value, upper[k as usize]), || format!("n={n} q={q} k={k}: binomial bound fails"))?;
                checks += 1;
            }
            // Every threshold t, plus a grid of deviations between them.
            let deviations = (0..=n)
                .flat_map(|t| [1.0 - t as f64 / mu, t as f64 / mu - 1.0])
                .chain((1..=300).map(|i| i as f64 / 100.0))
                .filter(|&a| a > 0.0);
            for a in deviations {
                let t = chernoff_bounds(a, mu).map_err(|e| e.to_string())?;
                let lo = (1.0 - a) * mu;
                let below: f64 = pmf.iter().enumerate().filter(|&(j, _)| (j as f64) < lo).map(|(_, w)| w).sum();
                ensure(t.lower.value == (-a * a * mu / 2.0).exp(), || format!("n={n} q={q} a={a}: lower clamped"))?;
                ensure(dominates(t.lower.value, below), || format!("n={n} q={q} a={a}: lower tail fails"))?;
                ensure(t.upper.is_some() == (a < 1.5), || format!("a={a}: upper tail availability"))?;
                if let Some(u) = t.upper {
                    let hi = (1.0 + a) * mu;
                    let above: f64 = pmf.iter().enumerate().filter(|&(j, _)| (j as f64) > hi).map(|(_, w)| w).sum();
                    ensure(u.value == (-a * a * mu / 3.0).exp(), || format!("n={n} q={q} a={a}: upper clamped"))?;
                    ensure(dominates(u.value, above), || format!("n={n} q={q} a={a}: upper tail fails"))?;
                }
                checks += 1;
            }
        }
    }
    // Hypergeometric spot checks.
    for (total, good, draws) in [(20, 8, 10), (30, 15, 12), (40, 10, 20), (25, 5, 20)] {
        let pmf = common::hypergeometric_pmf(total, good, draws);
        let mu = draws as f64 * good as f64 / total as f64;
        for i in 1..=140 {
            let a = i as f64 / 100.0;
            let t = chernoff_bounds(a, mu).map_err(|e| e.to_string())?;
            let below: f64 = pmf.iter().enumerate().filter(|&(j, _)| (j as f64) < (1.0 - a) * mu).map(|(_, w)| w).sum();
            let above: f64 = pmf.iter().enumerate().filter(|&(j, _)| (j as f64) > (1.0 + a) * mu).map(|(_, w)| w).sum();
            ensure(dominates(t.lower.value, below), || format!("hypergeometric {total},{good},{draws} a={a}: lower"))?;
            ensure(t.upper.is_none_or(|u| dominates(u.value, above)), || {
                format!("hypergeometric {total},{good},{draws} a={a}: upper")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} bound evaluations, 0 exceptions"))
}

fn pseudorandom_implies_matching() -> Outcome {
    const GRAPHS: u64 = 100_000;
    let eps_grid = [0.05, 0.1, 0.25, 0.5];
    let p_grid = [0.25, 0.5, 0.75, 1.0];
    let grid: Vec<(usize, f64, f64)> = itertools::iproduct!(2..=8usize.min(EXACT_MAX_M), p_grid, eps_grid)
        .filter(|&(m, p, _)| m as f64 * p >= 2.0)
        .collect();
    let results: Vec<Result<(bool, bool), String>> = (0..GRAPHS)
        .into_par_iter()
        .map(|i| {
            let (m, p, eps) = grid[i as usize % grid.len()];
            let mut rng = RngSeed(0xacce_0006).derive(i).rng();
            // Densities from p up to 1 so that the degree condition is met often.
            let density = rng.gen_range(p..=1.0);
            let adjacency = (0..m).map(|_| (0..m).filter(|_| rng.gen::<f64>() < density).collect()).collect();
            let g = BipartiteGraph::new(m, adjacency).map_err(|e| e.to_string())?;
            let verdict = is_pseudorandom(&g, eps, p, CheckMode::Exact).map_err(|e| e.to_string())?;
            if !verdict.certified() {
                return Ok((false, false));
            }
            let perfect = max_matching(&g).is_perfect();
            ensure(perfect && common::kuhn_perfect(&g), || format!("graph {i} (m={m}, p={p}, eps={eps}) has no perfect matching"))?;
            Ok((true, true))
        })
        .collect();
    let mut accepted = 0;
    for r in results {
        accepted += usize::from(r?.0);
    }
    ensure(accepted > 0, || "no graph was accepted; the criterion would be vacuous".into())?;
    Ok(format!("{GRAPHS} graphs over {} (m, p, eps) cells, {accepted} accepted, all with perfect matchings", grid.len()))
}

fn end_to_end_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(60, 3, 0.5, 0.2, 100, 2024);
    cfg.adversary = AdversaryRule::Greedy { threshold: ThresholdRule::Fraction { fraction: 0.7 } };
    cfg.pipeline.partition_retries = 50;
    cfg.pipeline.pi_budget = 200;
    cfg.pipeline.strategy = PiStrategy::FullRandom;
    cfg.record_runtime = false;
    cfg
}

fn end_to_end(csv_out: &mut Option<String>) -> Outcome {
    let cfg = end_to_end_config();
    ensure(cfg.adversary_label() == "greedy:21", || format!("threshold label {}", cfg.adversary_label()))?;
    let records = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let mut matched = 0;
    for r in &records {
        if !r.row.matched {
            continue;
        }
        matched += 1;
        let attacked = trial_instance(&cfg, r.row.trial).map_err(|e| e.to_string())?.attacked;
        let m = r.details.matching.as_ref().ok_or_else(|| format!("trial {} matched without a matching", r.row.trial))?;
        ensure(verify_perfect_matching(&attacked, m).is_perfect() && common::is_perfect_matching(&attacked, m), || {
            format!("trial {}: matching fails verification", r.row.trial)
        })?;
        ensure(r.row.verified, || format!("trial {}: matched but not verified", r.row.trial))?;
    }
    let rate = matched as f64 / records.len() as f64;
    *csv_out = Some(to_csv_string(&records));
    ensure(rate >= 0.90, || format!("success rate {rate} < 0.90"))?;
    let failed: HashSet<&str> = records.iter().filter(|r| !r.row.matched).map(|r| r.row.failure_stage.as_str()).collect();
    Ok(format!("success rate {rate:.2} over {} trials, every match verified; failure stages {failed:?}", records.len()))
}

fn determinism(first_parity: Option<&str>, first_e2e: Option<&str>) -> Outcome {
    let parity = parity_rows()?;
    ensure(first_parity == Some(parity.as_str()), || "parity CSV differs between runs".into())?;
    let e2e = to_csv_string(&run_experiment(&end_to_end_config()).map_err(|e| e.to_string())?);
    ensure(first_e2e == Some(e2e.as_str()), || "end-to-end CSV differs between runs".into())?;
    Ok(format!("parity CSV ({} bytes) and end-to-end CSV ({} bytes) identical", parity.len(), e2e.len()))
}

fn main() {
    let mut parity_csv = None;
    let mut e2e_csv = None;
    let mut failures = 0;
    let mut report = |id: u32, name: &str, limit: Duration, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; runtime {elapsed:.1?} exceeds {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("[PASS] criterion {id} {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failures += 1;
                println!("[FAIL] criterion {id} {name}: {why} ({elapsed:.2?})");
            }
        }
    };
    report(1, "hall equivalence", Duration::from_secs(5), &mut hall_equivalence);
    report(2, "matching oracle", Duration::from_secs(30), &mut matching_oracle);
    report(3, "parity soundness", Duration::from_secs(120), &mut || parity_soundness(&mut parity_csv));
    report(4, "extension statistics", Duration::from_secs(60), &mut extension_statistics);
    report(5, "bound validity", Duration::from_secs(10), &mut bound_validity);
    report(6, "pseudorandom implies matching", Duration::from_secs(120), &mut pseudorandom_implies_matching);
    report(7, "end-to-end success rate", Duration::from_secs(600), &mut || end_to_end(&mut e2e_csv));
    let (parity_csv, e2e_csv) = (parity_csv.clone(), e2e_csv.clone());
    report(8, "determinism", Duration::from_secs(600), &mut || determinism(parity_csv.as_deref(), e2e_csv.as_deref()));
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
