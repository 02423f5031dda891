use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::metrics::{
    chain_metrics_union, edge_reachable_ratio, node_match_ratio, path_semantic_correctness, ChainScores, PathJudge,
};
use super::{BenchError, ReferenceGraph};
use crate::alias::AliasRegistry;
use crate::graph::{Graph, NodeId};
use crate::lineage::{lineage_from_seeds, Algorithm, SearchParams};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedPolicy {
    #[default]
    Newest,
    Oldest,
}

/// Whether chain metrics use only the top chain or every returned chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoringMode {
    #[default]
    BestChain,
    Union,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub params: SearchParams,
    pub max_hops: usize,
    pub seed_policy: SeedPolicy,
    pub mode: ScoringMode,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            algorithms: alloc::vec![
                Algorithm::SgtMcts,
                Algorithm::Beam { width: 1 },
                Algorithm::Beam { width: 5 },
                Algorithm::RandomWalk { rollouts: 200 },
            ],
            params: SearchParams::default(),
            max_hops: 4,
            seed_policy: SeedPolicy::Newest,
            mode: ScoringMode::BestChain,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRow {
    pub chain: usize,
    pub seed: Option<NodeId>,
    pub retrieved: Vec<NodeId>,
    pub scores: ChainScores,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoReport {
    pub algorithm: String,
    pub nmr: f64,
    pub err: f64,
    pub psc: f64,
    pub nr: f64,
    pub er: f64,
    pub cas: f64,
    pub chains: Vec<ChainRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub judge: String,
    pub algorithms: Vec<AlgoReport>,
    pub warnings: Vec<String>,
}

/// Seeds every algorithm at each reference chain's newest (or oldest) method
/// and averages the chain metrics of what it retrieves.
pub fn run_lineage_benchmark(
    graph: &Graph,
    registry: &AliasRegistry,
    reference: &ReferenceGraph,
    config: &BenchConfig,
    judge: &dyn PathJudge,
    rng_seed: u64,
) -> Result<BenchReport, BenchError> {
    reference.validate()?;
    let mut warnings = Vec::new();
    if reference.methods.is_empty() {
        warnings.push(String::from("empty reference: node match ratio defined as 1.0"));
    }
    let nmr = node_match_ratio(reference, graph, registry);
    let reach = edge_reachable_ratio(reference, graph, registry, config.max_hops);
    let psc = path_semantic_correctness(graph, &reach.paths, judge);

    let seeds: Vec<Option<NodeId>> = reference
        .chains
        .iter()
        .map(|c| {
            let name = match config.seed_policy {
                SeedPolicy::Newest => c.last(),
                SeedPolicy::Oldest => c.first(),
            }
            .expect("validated non-empty");
            registry.lookup(name).filter(|id| graph.contains(id)).cloned()
        })
        .collect();
    for (i, s) in seeds.iter().enumerate() {
        if s.is_none() {
            warnings.push(format!("reference chain {i}: seed method does not resolve"));
        }
    }

    let mut algorithms = Vec::new();
    for algo in &config.algorithms {
        let mut rows = Vec::new();
        for (i, chain) in reference.chains.iter().enumerate() {
            let (retrieved, scores) = match &seeds[i] {
                None => (Vec::new(), ChainScores::default()),
                Some(seed) => {
                    let res = lineage_from_seeds(graph, core::slice::from_ref(seed), *algo, &config.params, rng_seed)?;
                    let lists: Vec<&[NodeId]> = match config.mode {
                        ScoringMode::BestChain => res.chains.iter().take(1).map(|c| c.nodes.as_slice()).collect(),
                        ScoringMode::Union => res.chains.iter().map(|c| c.nodes.as_slice()).collect(),
                    };
                    let scores = chain_metrics_union(&lists, chain, graph, registry);
                    (res.chains.first().map(|c| c.nodes.clone()).unwrap_or_default(), scores)
                }
            };
            rows.push(ChainRow { chain: i, seed: seeds[i].clone(), retrieved, scores });
        }
        let mean = |f: fn(&ChainScores) -> f64| {
            if rows.is_empty() {
                0.0
            } else {
                rows.iter().map(|r| f(&r.scores)).sum::<f64>() / rows.len() as f64
            }
        };
        algorithms.push(AlgoReport {
            algorithm: algo.name(),
            nmr,
            err: reach.ratio,
            psc,
            nr: mean(|s| s.nr),
            er: mean(|s| s.er),
            cas: mean(|s| s.cas),
            chains: rows,
        });
    }
    Ok(BenchReport { judge: String::from(judge.name()), algorithms, warnings })
}
