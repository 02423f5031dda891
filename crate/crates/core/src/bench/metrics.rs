use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ReferenceGraph;
use crate::alias::AliasRegistry;
use crate::graph::{Edge, Graph, NodeId};

fn resolve<'r>(name: &str, graph: &Graph, registry: &'r AliasRegistry) -> Option<&'r NodeId> {
    registry.lookup(name).filter(|id| graph.contains(id))
}

/// Share of reference methods resolving to a graph method; 1.0 for an empty
/// reference (callers report a warning).
pub fn node_match_ratio(reference: &ReferenceGraph, graph: &Graph, registry: &AliasRegistry) -> f64 {
    if reference.methods.is_empty() {
        return 1.0;
    }
    let hit = reference.methods.iter().filter(|m| resolve(m, graph, registry).is_some()).count();
    hit as f64 / reference.methods.len() as f64
}

/// A graph path found for a reference edge, in influence order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveredPath {
    pub reference_edge: (String, String),
    pub nodes: Vec<NodeId>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReachResult {
    pub ratio: f64,
    pub paths: Vec<RecoveredPath>,
}

/// Shortest influence-direction path of causal edges from `from` to `to`
/// within `max_hops`. Neighbours are explored strong edges first, then by id.
fn bfs_path(graph: &Graph, from: &NodeId, to: &NodeId, max_hops: usize) -> Option<(Vec<NodeId>, Vec<Edge>)> {
    let mut parent: BTreeMap<NodeId, (NodeId, Edge)> = BTreeMap::new();
    let mut seen: BTreeSet<NodeId> = BTreeSet::from([from.clone()]);
    let mut queue = VecDeque::from([(from.clone(), 0usize)]);
    while let Some((u, d)) = queue.pop_front() {
        if u == *to {
            let mut nodes = vec![u.clone()];
            let mut edges = Vec::new();
            let mut cur = u;
            while let Some((p, e)) = parent.get(&cur) {
                nodes.push(p.clone());
                edges.push(e.clone());
                cur = p.clone();
            }
            nodes.reverse();
            edges.reverse();
            return Some((nodes, edges));
        }
        if d == max_hops {
            continue;
        }
        let mut next: Vec<&Edge> = graph.in_edges(&u).filter(|e| e.edge_type.is_causal()).collect();
        next.sort_by(|a, b| {
            b.edge_type.is_strong().cmp(&a.edge_type.is_strong()).then_with(|| a.source.cmp(&b.source))
        });
        for e in next {
            let v = e.other(&u).clone();
            if seen.insert(v.clone()) {
                parent.insert(v.clone(), (u.clone(), e.clone()));
                queue.push_back((v, d + 1));
            }
        }
    }
    None
}

/// Share of reference edges whose endpoints both resolve and are joined by a
/// causal path of at most `max_hops` edges in influence direction.
pub fn edge_reachable_ratio(
    reference: &ReferenceGraph,
    graph: &Graph,
    registry: &AliasRegistry,
    max_hops: usize,
) -> ReachResult {
    let mut paths = Vec::new();
    for (a, b) in &reference.edges {
        let (Some(u), Some(v)) = (resolve(a, graph, registry), resolve(b, graph, registry)) else { continue };
        if let Some((nodes, edges)) = bfs_path(graph, u, v, max_hops) {
            paths.push(RecoveredPath { reference_edge: (a.clone(), b.clone()), nodes, edges });
        }
    }
    let ratio = if reference.edges.is_empty() { 0.0 } else { paths.len() as f64 / reference.edges.len() as f64 };
    ReachResult { ratio, paths }
}

/// Decides whether a recovered path preserves the intended evolution.
pub trait PathJudge {
    fn name(&self) -> &str;
    fn judge(&self, graph: &Graph, path: &RecoveredPath) -> bool;
}

/// Heuristic judge: every edge strong-causal and years non-decreasing along
/// the path where known.
#[derive(Clone, Copy, Debug, Default)]
pub struct HeuristicJudge;

impl PathJudge for HeuristicJudge {
    fn name(&self) -> &str {
        "heuristic (strong-causal edges, non-decreasing years)"
    }

    fn judge(&self, graph: &Graph, path: &RecoveredPath) -> bool {
        let strong = path.edges.iter().all(|e| e.edge_type.is_strong());
        let years: Vec<i32> = path.nodes.iter().filter_map(|n| graph.year_of(n)).collect();
        strong && years.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Fraction of paths the judge accepts; 0.0 with no paths.
pub fn path_semantic_correctness(graph: &Graph, paths: &[RecoveredPath], judge: &dyn PathJudge) -> f64 {
    if paths.is_empty() {
        return 0.0;
    }
    paths.iter().filter(|p| judge.judge(graph, p)).count() as f64 / paths.len() as f64
}

/// Node recall, adjacent-transition recall and normalized LCS.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainScores {
    pub nr: f64,
    pub er: f64,
    pub cas: f64,
}

pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { row[j + 1].max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

fn resolved_reference<'r>(reference: &[String], graph: &Graph, registry: &'r AliasRegistry) -> Vec<Option<&'r NodeId>> {
    reference.iter().map(|n| resolve(n, graph, registry)).collect()
}

fn adjacent_in(chain: &[NodeId], a: &NodeId, b: &NodeId) -> bool {
    chain.windows(2).any(|w| w[0] == *a && w[1] == *b)
}

/// Scores a retrieved chain (oldest first) against a non-empty reference.
/// Unresolved reference names never count as recovered.
pub fn chain_metrics(
    retrieved: &[NodeId],
    reference: &[String],
    graph: &Graph,
    registry: &AliasRegistry,
) -> ChainScores {
    chain_metrics_union(&[retrieved], reference, graph, registry)
}

/// As [`chain_metrics`] over several retrieved chains: NR over the union of
/// their nodes, ER over transitions adjacent in any chain, CAS as the best
/// single-chain alignment.
pub fn chain_metrics_union(
    retrieved: &[&[NodeId]],
    reference: &[String],
    graph: &Graph,
    registry: &AliasRegistry,
) -> ChainScores {
    if reference.is_empty() {
        return ChainScores::default();
    }
    let refs = resolved_reference(reference, graph, registry);
    let present: BTreeSet<&NodeId> = retrieved.iter().flat_map(|c| c.iter()).collect();
    let recovered = |r: &Option<&NodeId>| r.is_some_and(|id| present.contains(id));
    let n = reference.len() as f64;
    let nr = refs.iter().filter(|r| recovered(r)).count() as f64 / n;
    let er = if refs.len() == 1 {
        if recovered(&refs[0]) {
            1.0
        } else {
            0.0
        }
    } else {
        let hits = refs
            .windows(2)
            .filter(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => retrieved.iter().any(|c| adjacent_in(c, a, b)),
                _ => false,
            })
            .count();
        hits as f64 / (n - 1.0)
    };
    let members: BTreeSet<&NodeId> = refs.iter().flatten().copied().collect();
    let cas = retrieved
        .iter()
        .map(|c| {
            let filtered: Vec<Option<&NodeId>> = c.iter().filter(|x| members.contains(x)).map(Some).collect();
            // Unresolved (`None`) reference entries never equal a member.
            lcs_len(&filtered, &refs) as f64 / n
        })
        .fold(0.0, f64::max);
    ChainScores { nr, er, cas }
}
