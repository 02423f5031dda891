//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn fx(rel: &str) -> String {
    fixture(rel).to_string_lossy().into_owned()
}

/// Runs the binary with `args`, inside `cwd`.
pub fn run(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_methodgraph")).args(args).current_dir(cwd).output().expect("binary runs")
}

/// The graph flags for one fixture directory.
pub fn graph(dir: &str) -> Vec<String> {
    let mut v = vec![
        "--graph-nodes".into(),
        fx(&format!("{dir}/nodes.jsonl")),
        "--graph-edges".into(),
        fx(&format!("{dir}/edges.jsonl")),
    ];
    if fixture(&format!("{dir}/method_seeds.jsonl")).exists() {
        v.extend(["--method-seeds".into(), fx(&format!("{dir}/method_seeds.jsonl"))]);
    }
    if fixture(&format!("{dir}/aliases.json")).exists() {
        v.extend(["--aliases".into(), fx(&format!("{dir}/aliases.json"))]);
    }
    v
}

pub fn args<'a>(head: &[&'a str], graph: &'a [String], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().copied().chain(graph.iter().map(String::as_str)).chain(tail.iter().copied()).collect()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
