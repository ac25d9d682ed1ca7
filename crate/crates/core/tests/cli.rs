use std::path::Path;
use std::process::{Command, Output};

use hypermatch::{verify_perfect_matching, HyperMatching, Hypergraph};
use serde_json::Value;

fn hypermatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypermatch")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = hypermatch(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn read_matching(file: &str) -> HyperMatching {
    let text = std::fs::read_to_string(file).unwrap();
    HyperMatching::new(
        text.lines().map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect::<Vec<usize>>()),
    )
}

#[test]
fn gen_partition_adversary_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (graph, attacked, matching) = (path(dir.path(), "h.txt"), path(dir.path(), "a.txt"), path(dir.path(), "m.txt"));

    let out = hypermatch(&["gen", "--n", "24", "--k", "3", "--p", "0.7", "--seed", "5", "--out", &graph]);
    assert!(out.status.success());
    let h = Hypergraph::read_file(&graph).unwrap();
    assert_eq!((h.n(), h.k()), (24, 3));

    let report = ok_json(&["partition", "--in", &graph, "--k", "3", "--seed", "1", "--alpha", "0.9"]);
    assert!(report["worst_deviation"].as_f64().is_some());
    assert!(!hypermatch(&["partition", "--in", &graph, "--k", "4", "--alpha", "0.5"]).status.success());

    let summary = ok_json(&["adversary", "--in", &graph, "--mode", "greedy", "--threshold", "9", "--seed", "2", "--out", &attacked]);
    let a = Hypergraph::read_file(&attacked).unwrap();
    assert_eq!(summary["edges_after"].as_u64().unwrap() as usize, a.edge_count());
    assert_eq!(summary["edges_before"].as_u64().unwrap() as usize, h.edge_count());

    let out = hypermatch(&[
        "pipeline", "--in", &graph, "--epsilon", "0.2", "--seed", "3", "--strategy", "full", "--pi-budget", "200",
        "--out", &matching,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(verify_perfect_matching(&h, &read_matching(&matching)).is_perfect());
}

#[test]
fn parity_pipeline_writes_failure_report() {
    let dir = tempfile::tempdir().unwrap();
    let (graph, attacked, report) = (path(dir.path(), "h.txt"), path(dir.path(), "a.txt"), path(dir.path(), "r.json"));
    assert!(hypermatch(&["gen", "--n", "9", "--k", "3", "--p", "1", "--out", &graph]).status.success());
    let summary = ok_json(&["adversary", "--in", &graph, "--mode", "parity", "--out", &attacked]);
    assert_eq!(summary["edges_after"], 44);
    assert!(!hypermatch(&["adversary", "--in", &graph, "--mode", "parity", "--v1-size", "4", "--out", &attacked])
        .status
        .success());
    let out = hypermatch(&["pipeline", "--in", &attacked, "--epsilon", "0.2", "--pi-budget", "5", "--out", &report]);
    assert!(out.status.success());
    let failure: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(failure["stage"], "pi_search");
    assert!(failure["certificate"]["vertices"].as_array().is_some());
}

#[test]
fn match_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let bip = path(dir.path(), "b.txt");
    std::fs::write(&bip, "3\n0\n0\n1 2\n").unwrap();
    let v = ok_json(&["match", "--bipartite", &bip]);
    assert_eq!((v["size"].as_u64(), v["perfect"].as_bool()), (Some(2), Some(false)));
    assert_eq!(v["certificate"]["vertices"], serde_json::json!([0, 1]));
    std::fs::write(&bip, "2\n-\n0 1\n").unwrap();
    assert_eq!(ok_json(&["match", "--bipartite", &bip])["size"], 1);

    let matrix = path(dir.path(), "e.txt");
    std::fs::write(&matrix, "2\n10\n11\n").unwrap();
    let s = ok_json(&["stats", "--mode", "exact", "--matrix", &matrix, "--alpha", "0.5"]);
    for field in ["mu", "variance", "variance_bound", "median", "containment", "mode"] {
        assert!(s.get(field).is_some(), "missing {field}");
    }
    assert_eq!((s["mu"].as_f64(), s["variance"].as_f64(), s["median"].as_u64()), (Some(1.5), Some(0.25), Some(1)));
    assert_eq!(s["containment"], true);
    let e = ok_json(&["stats", "--mode", "empirical", "--matrix", &matrix, "--samples", "500", "--seed", "4"]);
    assert_eq!(e["mode"]["kind"], "empirical");
    std::fs::write(&matrix, "2\n10\n1\n").unwrap();
    assert!(!hypermatch(&["stats", "--mode", "exact", "--matrix", &matrix]).status.success());
}

#[test]
fn experiment_flags_and_config_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, cfg) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"), path(dir.path(), "cfg.json"));
    let s = ok_json(&[
        "experiment", "--n", "12", "--k", "3", "--p", "0.8", "--epsilon", "0.2", "--trials", "6", "--seed", "9",
        "--adversary", "greedy", "--no-runtime", "--out", &a,
    ]);
    assert_eq!(s["trials"], 6);
    std::fs::write(
        &cfg,
        format!(
            r#"{{"n": 12, "k": 3, "p": 0.8, "epsilon": 0.2, "trials": 6, "base_seed": 9,
               "adversary": {{"kind": "greedy"}}, "record_runtime": false, "out": {b:?}}}"#
        ),
    )
    .unwrap();
    ok_json(&["experiment", "--config", &cfg]);
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.starts_with("trial,seed,n,k,p,epsilon,adversary,edges_before,edges_after,residual_min_codegree,partition_worst_deviation,delta_star,pi_attempts,matched,verified,failure_stage,runtime_ms\n"));

    let json = path(dir.path(), "r.json");
    ok_json(&["experiment", "--config", &cfg, "--format", "json", "--out", &json]);
    let records: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 6);

    let out = hypermatch(&["experiment", "--n", "7", "--k", "3", "--p", "0.5", "--epsilon", "0.2", "--trials", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("must divide"));
    assert!(!hypermatch(&["experiment", "--config", &path(dir.path(), "missing.json")]).status.success());
}
