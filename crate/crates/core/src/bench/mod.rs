//! Benchmark metrics against reference graphs and chains, plus a synthetic
//! ground-truth generator.
//!
//! Reference edges and chains are written in influence order: an edge
//! `(a, b)` means `b` evolved from `a`, and chains run oldest to newest.

mod metrics;
mod run;
mod synth;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use metrics::{
    chain_metrics, chain_metrics_union, edge_reachable_ratio, lcs_len, node_match_ratio, path_semantic_correctness,
    ChainScores, HeuristicJudge, PathJudge, ReachResult, RecoveredPath,
};
pub use run::{run_lineage_benchmark, AlgoReport, BenchConfig, BenchReport, ChainRow, ScoringMode, SeedPolicy};
pub use synth::{synthesize_graph, SynthGraphParams};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("reference chain {0} is empty")]
    EmptyChain(usize),
    #[error("reference chain member `{0}` is not a reference method")]
    UnknownChainMember(String),
    #[error("reference edge endpoint `{0}` is not a reference method")]
    UnknownEdgeEndpoint(String),
    #[error("infeasible synthetic parameters: {0}")]
    InfeasibleParams(&'static str),
    #[error(transparent)]
    Lineage(#[from] crate::lineage::LineageError),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReferenceGraph {
    pub methods: Vec<String>,
    /// (predecessor, successor) pairs.
    pub edges: Vec<(String, String)>,
    /// Oldest-first method sequences.
    pub chains: Vec<Vec<String>>,
}

impl ReferenceGraph {
    pub fn validate(&self) -> Result<(), BenchError> {
        let known = |n: &String| self.methods.contains(n);
        for (i, c) in self.chains.iter().enumerate() {
            if c.is_empty() {
                return Err(BenchError::EmptyChain(i));
            }
            if let Some(bad) = c.iter().find(|n| !known(n)) {
                return Err(BenchError::UnknownChainMember(bad.clone()));
            }
        }
        for (a, b) in &self.edges {
            for n in [a, b] {
                if !known(n) {
                    return Err(BenchError::UnknownEdgeEndpoint(n.clone()));
                }
            }
        }
        Ok(())
    }
}
