//! Artifact records and their pre-write checks.

use methodgraph_core::bench::BenchReport;
use methodgraph_core::lineage::{EvolutionChain, Provenance};
use methodgraph_core::{EdgeType, Graph, NodeId};
use serde::{Deserialize, Serialize};

/// A `chains.jsonl` line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub nodes: Vec<NodeId>,
    pub edge_types: Vec<EdgeType>,
    pub confidences: Vec<f64>,
    pub rank_score: f64,
    pub provenance: Provenance,
}

pub fn chain_record(c: &EvolutionChain) -> ChainRecord {
    ChainRecord {
        nodes: c.nodes.clone(),
        edge_types: c.edge_types(),
        confidences: c.confidences(),
        rank_score: c.rank_score,
        provenance: c.provenance,
    }
}

/// Every edge exists in the graph and links consecutive chain nodes.
pub fn check_chain(graph: &Graph, c: &EvolutionChain) -> Result<(), String> {
    if c.nodes.len() != c.edges.len() + 1 {
        return Err(format!("chain has {} nodes but {} edges", c.nodes.len(), c.edges.len()));
    }
    for (i, e) in c.edges.iter().enumerate() {
        if graph.edge(&e.key()).is_none() {
            return Err(format!("edge {} is not in the graph", e.key()));
        }
        let (a, b) = (&c.nodes[i], &c.nodes[i + 1]);
        let links = (&e.source == a && &e.target == b) || (&e.source == b && &e.target == a);
        if !links {
            return Err(format!("edge {} does not join {a} and {b}", e.key()));
        }
    }
    if !c.rank_score.is_finite() {
        return Err("non-finite rank score".into());
    }
    Ok(())
}

/// The per-algorithm metric table as CSV.
pub fn metric_csv(report: &BenchReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["algorithm", "nmr", "err", "psc", "nr", "er", "cas"]).expect("in-memory write");
    for a in &report.algorithms {
        let row = [a.nmr, a.err, a.psc, a.nr, a.er, a.cas].map(|x| x.to_string());
        w.write_record(std::iter::once(a.algorithm.clone()).chain(row)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
