//! Lineage reconstruction over the strong-causal subgraph.
//!
//! The search runs separately backward (toward ancestors) and forward (toward
//! descendants) from each seed; the two halves are spliced through the seed
//! into chronological chains, deduplicated and ranked. Beam search and random
//! walks share the same step generator and serve as baselines.

mod baselines;
mod mcts;
mod reconstruct;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::graph::{Direction, Edge, EdgeKey, EdgeType, Graph, GraphError, NodeId};

pub use baselines::{beam_search_baseline, random_walk_baseline};
pub use mcts::{mcts_direction_search, sgt_uct, DirectionSearch, SearchCounters, SearchTree, TreeNodeStats};
pub use reconstruct::{
    dedup_chains, find_branch_points, lineage_from_seeds, reconstruct_lineage, splice, splice_and_dedup, Algorithm,
    BranchPoint, LineageResult,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LineageError {
    #[error("year gap {0} is below the temporal hard filter")]
    GapBelowFilter(i32),
    #[error("edge {0} carries no evidence")]
    NoEvidence(EdgeKey),
    #[error("invalid search parameters: {0}")]
    InvalidParams(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Search knobs shared by SGT-MCTS and the baselines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    pub c_uct: f64,
    pub lambda: f64,
    /// Iterations per direction per seed.
    pub budget: u32,
    /// Maximum edges per direction.
    pub max_depth: usize,
    pub top_k: usize,
    pub dedup_jaccard: f64,
    pub dead_end_penalty: f64,
    /// (w_len, w_conf, w_visits)
    pub rank_weights: (f64, f64, f64),
    /// Length normalizer in nodes; `None` means `2·max_depth + 1`.
    pub l_max: Option<usize>,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            c_uct: core::f64::consts::SQRT_2,
            lambda: 0.5,
            budget: 200,
            max_depth: 5,
            top_k: 5,
            dedup_jaccard: 0.8,
            dead_end_penalty: -0.05,
            rank_weights: (0.4, 0.4, 0.2),
            l_max: None,
        }
    }
}

impl SearchParams {
    pub fn l_max(&self) -> usize {
        self.l_max.unwrap_or(2 * self.max_depth + 1)
    }

    pub fn validate(&self) -> Result<(), LineageError> {
        let (a, b, c) = self.rank_weights;
        if (a + b + c - 1.0).abs() > 1e-9 || a < 0.0 || b < 0.0 || c < 0.0 {
            return Err(LineageError::InvalidParams("rank weights must be non-negative and sum to 1"));
        }
        if self.budget == 0 || self.max_depth == 0 || self.top_k == 0 {
            return Err(LineageError::InvalidParams("budget, max_depth and top_k must be positive"));
        }
        if self.l_max() == 0 {
            return Err(LineageError::InvalidParams("l_max must be positive"));
        }
        if !(self.c_uct >= 0.0 && self.lambda >= 0.0) {
            return Err(LineageError::InvalidParams("c_uct and lambda must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.dedup_jaccard) {
            return Err(LineageError::InvalidParams("dedup_jaccard must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Piecewise temporal coherence of a year gap; `None` means unknown.
pub fn temporal_coherence(delta_tau: Option<i32>) -> Result<f64, LineageError> {
    let Some(d) = delta_tau else { return Ok(0.70) };
    Ok(match d {
        d if d < -1 => return Err(LineageError::GapBelowFilter(d)),
        -1 => 0.40,
        0 => 0.85,
        1..=3 => 1.00,
        4..=6 => 0.80,
        d => f64::max(0.30, 1.00 - 0.08 * (d - 6) as f64),
    })
}

/// Graph prior of an edge: confidence × temporal coherence.
pub fn edge_prior(edge: &Edge, delta_tau: Option<i32>) -> Result<f64, LineageError> {
    let ev = edge.evidence.as_ref().ok_or_else(|| LineageError::NoEvidence(edge.key()))?;
    Ok(ev.confidence * temporal_coherence(delta_tau)?)
}

/// Mean edge prior times `min(1, len / max_depth)`; zero for an empty path.
pub fn rollout_reward(priors: &[f64], max_depth: usize) -> f64 {
    if priors.is_empty() || max_depth == 0 {
        return 0.0;
    }
    let mean = priors.iter().sum::<f64>() / priors.len() as f64;
    mean * f64::min(1.0, priors.len() as f64 / max_depth as f64)
}

/// One admissible hop from a node.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub edge: Edge,
    pub next: NodeId,
    pub gap: Option<i32>,
    pub prior: f64,
}

/// Strong-causal hops from `node` in `dir`, skipping hard-filtered gaps,
/// nodes in `visited` and masked edges. Ordered by descending confidence,
/// then neighbour id.
pub fn valid_steps(
    graph: &Graph,
    node: &NodeId,
    dir: Direction,
    visited: &BTreeSet<&NodeId>,
    mask: &BTreeSet<EdgeKey>,
) -> Result<Vec<Step>, LineageError> {
    let mut out = Vec::new();
    for (edge, next) in graph.strong_causal_successors(node, dir)? {
        let gap = graph.year_gap(edge);
        if gap.is_some_and(|g| g < -1) || visited.contains(next) || mask.contains(&edge.key()) {
            continue;
        }
        let prior = edge_prior(edge, gap)?;
        out.push(Step { edge: edge.clone(), next: next.clone(), gap, prior });
    }
    Ok(out)
}

/// Index of the step with the largest prior; the earliest wins ties.
pub(crate) fn greedy_pick(steps: &[Step]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in steps.iter().enumerate() {
        if best.is_none_or(|b| s.prior > steps[b].prior) {
            best = Some(i);
        }
    }
    best
}

/// A path from the seed in one direction, with per-node tree visits.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredPath {
    /// Starts at the seed.
    pub nodes: Vec<NodeId>,
    pub edges: Vec<Edge>,
    /// Visits of the search-tree node for each path prefix; 0 outside the tree.
    pub visits: Vec<u32>,
    /// Search-specific score (accumulated value, beam score, frequency).
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Primary,
    Branch,
}

/// A chronological chain (oldest first) of strong-causal edges.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionChain {
    pub nodes: Vec<NodeId>,
    /// `edges[i]` joins `nodes[i]` and `nodes[i + 1]`.
    pub edges: Vec<Edge>,
    pub seed: NodeId,
    /// Per-node visits, aligned with `nodes`.
    pub visits: Vec<u32>,
    pub mean_confidence: f64,
    /// Mean visits over the non-seed nodes.
    pub mean_visits: f64,
    pub rank_score: f64,
    pub provenance: Provenance,
}

impl EvolutionChain {
    pub fn new(nodes: Vec<NodeId>, edges: Vec<Edge>, visits: Vec<u32>, seed: NodeId, provenance: Provenance) -> Self {
        let mean_confidence =
            if edges.is_empty() { 0.0 } else { edges.iter().map(Edge::confidence).sum::<f64>() / edges.len() as f64 };
        let others: Vec<u32> = nodes.iter().zip(&visits).filter(|(n, _)| **n != seed).map(|(_, v)| *v).collect();
        let mean_visits =
            if others.is_empty() { 0.0 } else { others.iter().map(|&v| v as f64).sum::<f64>() / others.len() as f64 };
        Self { nodes, edges, seed, visits, mean_confidence, mean_visits, rank_score: 0.0, provenance }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_types(&self) -> Vec<EdgeType> {
        self.edges.iter().map(|e| e.edge_type).collect()
    }

    pub fn confidences(&self) -> Vec<f64> {
        self.edges.iter().map(Edge::confidence).collect()
    }

    pub fn node_set(&self) -> BTreeSet<&NodeId> {
        self.nodes.iter().collect()
    }
}

/// `w_len·|π|/L_max + w_conf·conf̄ + w_visits·N̄/max_visits`, with the visit
/// term clamped to [0, 1] and zero when `max_visits` is zero.
pub fn rank_chain(chain: &EvolutionChain, params: &SearchParams, max_visits: u32) -> f64 {
    if chain.is_empty() {
        return 0.0;
    }
    let (wl, wc, wv) = params.rank_weights;
    let visits = if max_visits == 0 { 0.0 } else { f64::min(1.0, chain.mean_visits / max_visits as f64) };
    wl * chain.len() as f64 / params.l_max() as f64 + wc * chain.mean_confidence + wv * visits
}
