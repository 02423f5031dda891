//! Splicing, deduplication, ranking and branch discovery.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    beam_search_baseline, mcts_direction_search, random_walk_baseline, rank_chain, valid_steps, EvolutionChain,
    LineageError, Provenance, ScoredPath, SearchParams,
};
use crate::alias::AliasRegistry;
use crate::graph::{Direction, EdgeKey, Graph, NodeId};
use crate::retrieval::fnv1a;
use crate::text::jaccard;

/// Which per-direction search feeds the splice/rank pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Algorithm {
    SgtMcts,
    Beam { width: usize },
    RandomWalk { rollouts: u32 },
}

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Self::SgtMcts => "sgt-mcts".into(),
            Self::Beam { width } => alloc::format!("beam@{width}"),
            Self::RandomWalk { .. } => "random-walk".into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LineageResult {
    pub seeds: Vec<NodeId>,
    /// Primary chains by rank, then branch chains by rank.
    pub chains: Vec<EvolutionChain>,
    pub diagnostics: Vec<String>,
}

/// Joins a backward and a forward path (both starting at `seed`) into one
/// chronological chain.
pub fn splice(backward: &ScoredPath, forward: &ScoredPath, seed: &NodeId, provenance: Provenance) -> EvolutionChain {
    let mut nodes: Vec<NodeId> = backward.nodes.iter().rev().cloned().collect();
    nodes.extend(forward.nodes.iter().skip(1).cloned());
    let mut edges: Vec<_> = backward.edges.iter().rev().cloned().collect();
    edges.extend(forward.edges.iter().cloned());
    let mut visits: Vec<u32> = backward.visits.iter().rev().copied().collect();
    visits.extend(forward.visits.iter().skip(1).copied());
    EvolutionChain::new(nodes, edges, visits, seed.clone(), provenance)
}

fn by_rank(a: &EvolutionChain, b: &EvolutionChain) -> core::cmp::Ordering {
    b.rank_score.total_cmp(&a.rank_score).then_with(|| a.nodes.cmp(&b.nodes))
}

/// Keeps chains in order, dropping any whose node-set Jaccard with an
/// already-kept chain reaches `threshold`.
pub fn dedup_chains(chains: Vec<EvolutionChain>, threshold: f64) -> Vec<EvolutionChain> {
    let mut kept: Vec<EvolutionChain> = Vec::new();
    for c in chains {
        let set = c.node_set();
        if kept.iter().all(|k| jaccard(&k.node_set(), &set) < threshold) {
            kept.push(c);
        }
    }
    kept
}

/// All backward × forward splices, ranked and deduplicated.
pub fn splice_and_dedup(
    backward: &[ScoredPath],
    forward: &[ScoredPath],
    seed: &NodeId,
    params: &SearchParams,
    max_visits: u32,
) -> Vec<EvolutionChain> {
    let mut chains = Vec::new();
    for b in backward {
        for f in forward {
            let mut c = splice(b, f, seed, Provenance::Primary);
            c.rank_score = rank_chain(&c, params, max_visits);
            chains.push(c);
        }
    }
    chains.sort_by(by_rank);
    dedup_chains(chains, params.dedup_jaccard)
}

/// Paths from one search, plus the largest visit count it observed.
fn search_direction(
    graph: &Graph,
    seed: &NodeId,
    dir: Direction,
    algo: Algorithm,
    params: &SearchParams,
    mask: &BTreeSet<EdgeKey>,
    rng_seed: u64,
) -> Result<(Vec<ScoredPath>, u32), LineageError> {
    let (mut paths, max_visits) = match algo {
        Algorithm::SgtMcts => {
            let s = mcts_direction_search(graph, seed, dir, params, mask)?;
            let mv = s.tree.max_visits();
            (s.paths, mv)
        }
        Algorithm::Beam { width } => (beam_search_baseline(graph, seed, dir, width, params, mask)?, 0),
        Algorithm::RandomWalk { rollouts } => {
            let s = fnv1a(rng_seed, seed.as_str().as_bytes());
            (random_walk_baseline(graph, seed, dir, rollouts, s, params, mask)?, 0)
        }
    };
    paths.truncate(params.top_k);
    Ok((paths, max_visits))
}

/// A chain node with alternative strong-causal children in a search
/// direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoint {
    pub index: usize,
    pub node: NodeId,
    pub direction: Direction,
}

/// Nodes of `chain` that have ≥ 2 admissible children in their search
/// direction (backward before the seed, forward after it, both at it) while
/// the chain traverses exactly one of them.
pub fn find_branch_points(graph: &Graph, chain: &EvolutionChain) -> Result<Vec<BranchPoint>, LineageError> {
    let Some(seed_idx) = chain.nodes.iter().position(|n| *n == chain.seed) else {
        return Ok(Vec::new());
    };
    let none = BTreeSet::new();
    let mut out = Vec::new();
    for (i, node) in chain.nodes.iter().enumerate() {
        for dir in [Direction::Backward, Direction::Forward] {
            let in_direction = match dir {
                Direction::Backward => i <= seed_idx && i > 0,
                Direction::Forward => i >= seed_idx && i + 1 < chain.nodes.len(),
            };
            if !in_direction {
                continue;
            }
            let steps = valid_steps(graph, node, dir, &BTreeSet::new(), &none)?;
            if steps.len() >= 2 {
                out.push(BranchPoint { index: i, node: node.clone(), direction: dir });
            }
        }
    }
    Ok(out)
}

/// Runs `algo` from every seed in both directions, keeps the `top_k` best
/// spliced chains overall, then re-searches once from each branch point
/// with the chain's edges masked and half the budget.
pub fn lineage_from_seeds(
    graph: &Graph,
    seeds: &[NodeId],
    algo: Algorithm,
    params: &SearchParams,
    rng_seed: u64,
) -> Result<LineageResult, LineageError> {
    params.validate()?;
    let none = BTreeSet::new();
    let mut pooled = Vec::new();
    let mut max_visits_of: Vec<(NodeId, u32)> = Vec::new();
    for seed in seeds {
        let (back, mb) = search_direction(graph, seed, Direction::Backward, algo, params, &none, rng_seed)?;
        let (fwd, mf) = search_direction(graph, seed, Direction::Forward, algo, params, &none, rng_seed)?;
        let mv = mb.max(mf);
        max_visits_of.push((seed.clone(), mv));
        pooled.extend(splice_and_dedup(&back, &fwd, seed, params, mv));
    }
    pooled.sort_by(by_rank);
    let mut primaries = dedup_chains(pooled, params.dedup_jaccard);
    primaries.truncate(params.top_k);

    let mut branches = Vec::new();
    for chain in &primaries {
        let mv = max_visits_of.iter().find(|(s, _)| *s == chain.seed).map_or(0, |(_, v)| *v);
        let seed_idx = chain.nodes.iter().position(|n| *n == chain.seed).unwrap_or(0);
        let mask: BTreeSet<EdgeKey> = chain.edges.iter().map(|e| e.key()).collect();
        for bp in find_branch_points(graph, chain)? {
            let used = bp.index.abs_diff(seed_idx);
            if used >= params.max_depth {
                continue;
            }
            let sub = SearchParams {
                budget: (params.budget / 2).max(1),
                max_depth: params.max_depth - used,
                l_max: Some(params.l_max()),
                ..*params
            };
            let salt = fnv1a(rng_seed, bp.node.as_str().as_bytes());
            let (paths, _) = search_direction(graph, &bp.node, bp.direction, algo, &sub, &mask, salt)?;
            for p in paths.iter().filter(|p| !p.edges.is_empty()) {
                let mut c = match bp.direction {
                    Direction::Forward => {
                        let mut nodes = chain.nodes[..=bp.index].to_vec();
                        nodes.extend(p.nodes[1..].iter().cloned());
                        let mut edges = chain.edges[..bp.index].to_vec();
                        edges.extend(p.edges.iter().cloned());
                        let mut visits = chain.visits[..=bp.index].to_vec();
                        visits.extend(p.visits[1..].iter().copied());
                        EvolutionChain::new(nodes, edges, visits, chain.seed.clone(), Provenance::Branch)
                    }
                    Direction::Backward => {
                        let mut nodes: Vec<NodeId> = p.nodes.iter().rev().cloned().collect();
                        nodes.extend(chain.nodes[bp.index + 1..].iter().cloned());
                        let mut edges: Vec<_> = p.edges.iter().rev().cloned().collect();
                        edges.extend(chain.edges[bp.index..].iter().cloned());
                        let mut visits: Vec<u32> = p.visits.iter().rev().copied().collect();
                        visits.extend(chain.visits[bp.index + 1..].iter().copied());
                        EvolutionChain::new(nodes, edges, visits, chain.seed.clone(), Provenance::Branch)
                    }
                };
                c.rank_score = rank_chain(&c, params, mv);
                branches.push(c);
            }
        }
    }
    branches.sort_by(by_rank);
    let mut all = primaries;
    all.extend(branches);
    let chains = dedup_chains(all, params.dedup_jaccard);
    Ok(LineageResult { seeds: seeds.to_vec(), chains, diagnostics: Vec::new() })
}

/// SGT-MCTS lineage for the methods named in `query`.
pub fn reconstruct_lineage(
    query: &str,
    graph: &Graph,
    registry: &AliasRegistry,
    params: &SearchParams,
) -> Result<LineageResult, LineageError> {
    let seeds: Vec<NodeId> = registry.methods_in(query).into_iter().filter(|m| graph.contains(m)).collect();
    if seeds.is_empty() {
        return Ok(LineageResult {
            diagnostics: alloc::vec![String::from("no exact match: the query names no known method")],
            ..Default::default()
        });
    }
    lineage_from_seeds(graph, &seeds, Algorithm::SgtMcts, params, 0)
}
