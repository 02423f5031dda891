mod common;

use std::fs;

use common::{args, fx, graph, run, stderr};
use methodgraph::artifacts::ChainRecord;
use methodgraph::io::read_jsonl;
use methodgraph_core::evaluator::EvaluationReport;
use methodgraph_core::generator::Proposal;

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph("tiny");
    let ok = run(dir.path(), &args(&["validate"], &g, &[]));
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));

    let g = graph("broken_quote");
    let bad = run(dir.path(), &args(&["validate"], &g, &[]));
    assert_eq!(bad.status.code(), Some(1));
    let err = stderr(&bad);
    assert!(err.starts_with("error: ") && err.contains("quote-mismatch"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");

    let usage = run(dir.path(), &["validate", "--graph-nodes", "x"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn missing_file_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["validate", "--graph-nodes", "nope.jsonl", "--graph-edges", "nope.jsonl"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn external_provider_without_backend_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, r#"{"providers": {"embedder": {"kind": "external"}}}"#).unwrap();
    let g = graph("tiny");
    let cfg = cfg.to_string_lossy().into_owned();
    let idea = fx("tiny/idea.json");
    let o = run(dir.path(), &args(&["evaluate"], &g, &["--idea", &idea, "--config", &cfg]));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("external"), "{}", stderr(&o));
}

#[test]
fn lineage_writes_parseable_chains() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph("tiny");
    for algo in ["sgt-mcts", "beam@3", "random-walk"] {
        let o = run(dir.path(), &args(&["lineage"], &g, &["--query", "QLoRA", "--algo", algo, "--seed", "1"]));
        assert_eq!(o.status.code(), Some(0), "{algo}: {}", stderr(&o));
        let chains: Vec<(usize, ChainRecord)> = read_jsonl(&dir.path().join("chains.jsonl")).unwrap();
        assert!(!chains.is_empty(), "{algo}");
        assert!(chains
            .iter()
            .all(|(_, c)| c.nodes.last().unwrap().as_str() == "qlora" && c.nodes.len() == c.edge_types.len() + 1));
    }
    let bad = run(dir.path(), &args(&["lineage"], &g, &["--query", "QLoRA", "--algo", "dfs"]));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn lineage_unknown_query_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph("tiny");
    let o = run(dir.path(), &args(&["lineage"], &g, &["--query", "Perceiver"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no exact match"));
    assert_eq!(fs::read_to_string(dir.path().join("chains.jsonl")).unwrap(), "");
}

#[test]
fn evaluate_and_generate_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph("tiny");
    let idea = fx("tiny/idea.json");
    let o = run(dir.path(), &args(&["evaluate"], &g, &["--idea", &idea]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: EvaluationReport =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(!report.fallback_used && (1.0..=10.0).contains(&report.overall));

    let resp = fx("tiny/proposer_response.json");
    let o = run(dir.path(), &args(&["generate"], &g, &["--query", "attention cost", "--proposer-response", &resp]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p: Proposal = serde_json::from_str(&fs::read_to_string(dir.path().join("proposal.json")).unwrap()).unwrap();
    assert!(!p.fallback && p.certificate.is_some());

    let o = run(dir.path(), &args(&["generate"], &g, &["--query", "attention cost"]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p: Proposal = serde_json::from_str(&fs::read_to_string(dir.path().join("proposal.json")).unwrap()).unwrap();
    assert!(p.fallback);
}

#[test]
fn synth_then_bench_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let params = fx("tiny/synth_params.json");
    let o = run(dir.path(), &["synth", "--params", &params, "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let n = dir.path().join("synth/nodes.jsonl").to_string_lossy().into_owned();
    let e = dir.path().join("synth/edges.jsonl").to_string_lossy().into_owned();
    let r = dir.path().join("synth/reference.json").to_string_lossy().into_owned();
    let o = run(dir.path(), &["validate", "--graph-nodes", &n, "--graph-edges", &e]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(
        dir.path(),
        &[
            "bench",
            "--graph-nodes",
            &n,
            "--graph-edges",
            &e,
            "--reference",
            &r,
            "--algos",
            "sgt-mcts,beam@1",
            "--csv",
            "m.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert!(csv.starts_with("algorithm,nmr,err,psc,nr,er,cas\n"));
    assert_eq!(csv.lines().count(), 3);
}
