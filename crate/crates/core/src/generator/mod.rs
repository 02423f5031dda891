//! Strategy-driven proposal generation.
//!
//! A pure structural pass extracts four gap patterns from a retrieval context,
//! each pattern maps to one generation strategy, and a pluggable proposer
//! fills the strategy's template. Every accepted proposal carries a
//! certificate whose bottleneck quote must match the graph byte for byte;
//! anything else is replaced by a deterministic template proposal.

mod propose;


use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::graph::{BottleneckDimension, EdgeKey, Graph, MethodDag, NodeId};
use crate::lineage::EvolutionChain;
use crate::retrieval::{Context, Corpus};

pub use propose::{
    build_prompt, fallback_proposal, generate_proposal, parse_proposal, verify_certificate, Certificate,
    FallbackReason, GenerationOutcome, Proposal, Proposer, ProposerError, ScriptedProposer,
};

/// The four generation strategies, one per gap pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    BottleneckResolution,
    TrendExtrapolation,
    CrossPollination,
    ParadigmChallenge,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::BottleneckResolution,
        Strategy::TrendExtrapolation,
        Strategy::CrossPollination,
        Strategy::ParadigmChallenge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::BottleneckResolution => "bottleneck_resolution",
            Self::TrendExtrapolation => "trend_extrapolation",
            Self::CrossPollination => "cross_pollination",
            Self::ParadigmChallenge => "paradigm_challenge",
        }
    }
}

/// A taxonomy dimension with the context edges that support it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisEntry {
    pub dimension: BottleneckDimension,
    pub edges: Vec<EdgeKey>,
}

/// Two methods that are never used together and sit far apart in the method
/// DAG. `edges` are the causal context edges touching either side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodPair {
    pub a: NodeId,
    pub b: NodeId,
    pub edges: Vec<EdgeKey>,
}

/// The structural summary handed to the proposer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSummary {
    /// Bottleneck dimensions no strong-causal context edge improves.
    pub open_axes: Vec<AxisEntry>,
    /// Improvement dimensions of recent edges, most frequent first.
    pub recent_directions: Vec<AxisEntry>,
    /// Sacrifice dimensions repeated at least twice.
    pub sacrifice_axes: Vec<AxisEntry>,
    pub disconnected_pairs: Vec<MethodPair>,
}

impl GapSummary {
    pub fn is_empty(&self) -> bool {
        self.open_axes.is_empty()
            && self.recent_directions.is_empty()
            && self.sacrifice_axes.is_empty()
            && self.disconnected_pairs.is_empty()
    }

    /// Whether the pattern feeding `strategy` fired.
    pub fn has_pattern(&self, strategy: Strategy) -> bool {
        match strategy {
            Strategy::BottleneckResolution => !self.open_axes.is_empty(),
            Strategy::TrendExtrapolation => !self.recent_directions.is_empty(),
            Strategy::CrossPollination => !self.disconnected_pairs.is_empty(),
            Strategy::ParadigmChallenge => !self.sacrifice_axes.is_empty(),
        }
    }

    /// Every edge referenced anywhere in the summary.
    pub fn edge_refs(&self) -> BTreeSet<&EdgeKey> {
        let axes = self.open_axes.iter().chain(&self.recent_directions).chain(&self.sacrifice_axes);
        axes.flat_map(|a| &a.edges).chain(self.disconnected_pairs.iter().flat_map(|p| &p.edges)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub now_year: i32,
    /// Edges whose citing side is at most this many years old count as recent.
    pub recent_window: i32,
    /// Candidate methods scanned for disconnected pairs.
    pub pair_pool: usize,
    /// Pairs within this many method-DAG hops are considered connected.
    pub pair_max_distance: usize,
    /// Strategy tried first when several patterns fire.
    pub priority: Vec<Strategy>,
    /// Proposer calls before falling back; the second call is the retry.
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            now_year: 2025,
            recent_window: 2,
            pair_pool: 20,
            pair_max_distance: 3,
            priority: vec![
                Strategy::BottleneckResolution,
                Strategy::ParadigmChallenge,
                Strategy::CrossPollination,
                Strategy::TrendExtrapolation,
            ],
            max_attempts: 2,
        }
    }
}

/// Groups edge refs by dimension and orders groups by support, then by
/// dimension.
fn rank_axes(groups: BTreeMap<BottleneckDimension, Vec<EdgeKey>>, min_count: usize) -> Vec<AxisEntry> {
    let mut out: Vec<AxisEntry> = groups
        .into_iter()
        .filter(|(_, e)| e.len() >= min_count)
        .map(|(dimension, edges)| AxisEntry { dimension, edges })
        .collect();
    out.sort_by(|x, y| y.edges.len().cmp(&x.edges.len()).then(x.dimension.cmp(&y.dimension)));
    out
}

fn push_unique(v: &mut Vec<EdgeKey>, k: EdgeKey) {
    if !v.contains(&k) {
        v.push(k);
    }
}

/// Extracts the four gap patterns. Pure: no proposer call, no randomness.
pub fn build_gap_summary(
    context: &Context,
    chains: &[EvolutionChain],
    corpus: &Corpus<'_>,
    dag: &MethodDag,
    config: &GeneratorConfig,
) -> GapSummary {
    let graph = corpus.graph;
    let causal: Vec<_> = context
        .edges
        .iter()
        .filter_map(|e| Some((e, e.evidence.as_ref()?)))
        .filter(|(e, _)| e.edge_type.is_causal())
        .collect();

    let improved: BTreeSet<BottleneckDimension> =
        causal.iter().filter(|(e, _)| e.edge_type.is_strong()).filter_map(|(_, ev)| ev.improvement_dim).collect();
    let mut open: BTreeMap<BottleneckDimension, Vec<EdgeKey>> = BTreeMap::new();
    for b in &context.bottlenecks {
        if !improved.contains(&b.dimension) {
            push_unique(open.entry(b.dimension).or_default(), b.edge.clone());
        }
    }

    let mut recent: BTreeMap<BottleneckDimension, Vec<EdgeKey>> = BTreeMap::new();
    let mut sacrificed: BTreeMap<BottleneckDimension, Vec<EdgeKey>> = BTreeMap::new();
    for (e, ev) in &causal {
        let is_recent = graph.year_of(&e.source).is_some_and(|y| y >= config.now_year - config.recent_window);
        if let (true, Some(d)) = (is_recent, ev.improvement_dim) {
            push_unique(recent.entry(d).or_default(), e.key());
        }
        if let Some(d) = ev.sacrifice_dim {
            push_unique(sacrificed.entry(d).or_default(), e.key());
        }
    }

    GapSummary {
        open_axes: rank_axes(open, 1),
        recent_directions: rank_axes(recent, 1),
        sacrifice_axes: rank_axes(sacrificed, 2),
        disconnected_pairs: disconnected_pairs(context, chains, corpus, dag, config),
    }
}

/// Candidate pool: context methods in retrieval order, then methods on the
/// chains, capped at `pair_pool`.
fn pair_pool(context: &Context, chains: &[EvolutionChain], graph: &Graph, cap: usize) -> Vec<NodeId> {
    let mut pool: Vec<NodeId> = Vec::new();
    let chain_methods = chains.iter().flat_map(|c| &c.nodes).filter(|n| graph.method(n).is_some());
    for m in context.methods.iter().chain(chain_methods) {
        if pool.len() == cap {
            break;
        }
        if !pool.contains(m) {
            pool.push(m.clone());
        }
    }
    pool
}

fn disconnected_pairs(
    context: &Context,
    chains: &[EvolutionChain],
    corpus: &Corpus<'_>,
    dag: &MethodDag,
    config: &GeneratorConfig,
) -> Vec<MethodPair> {
    let graph = corpus.graph;
    let mut pool = pair_pool(context, chains, graph, config.pair_pool);
    pool.sort();
    let touching = |m: &NodeId| -> Vec<EdgeKey> {
        let sides: Vec<&NodeId> = [Some(m), graph.paper_of(m)].into_iter().flatten().collect();
        context
            .edges
            .iter()
            .filter(|e| e.edge_type.is_causal() && e.evidence.is_some())
            .filter(|e| sides.contains(&&e.source) || sides.contains(&&e.target))
            .map(|e| e.key())
            .collect()
    };
    let mut out = Vec::new();
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i + 1..] {
            if corpus.co_utilized(a, b) || dag.undirected_distance(a, b, config.pair_max_distance).is_some() {
                continue;
            }
            let mut edges = touching(a);
            for k in touching(b) {
                push_unique(&mut edges, k);
            }
            out.push(MethodPair { a: a.clone(), b: b.clone(), edges });
        }
    }
    out
}

/// Highest-priority strategy whose pattern fired; trend extrapolation when
/// none did (the caller marks that case degenerate).
pub fn select_strategy(summary: &GapSummary, config: &GeneratorConfig) -> Strategy {
    config
        .priority
        .iter()
        .copied()
        .find(|s| summary.has_pattern(*s))
        .or_else(|| Strategy::ALL.into_iter().find(|s| summary.has_pattern(*s)))
        .unwrap_or(Strategy::TrendExtrapolation)
}
