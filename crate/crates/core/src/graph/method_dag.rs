//! Deterministic projection of paper-level causal edges onto methods.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::builder::find_cycle;
use super::{EdgeType, Graph, MethodRelation, MethodSeed, Node, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MethodDagError {
    #[error("seed endpoint `{id}` is not a method")]
    SeedNotMethod { id: NodeId },
    #[error("seed relation {relation:?} is derived by projection, not curated")]
    SeedNotCurated { relation: MethodRelation },
    #[error("method projection has a cycle: {cycle:?}")]
    Cycle { cycle: Vec<NodeId> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MethodDag {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<(NodeId, NodeId, MethodRelation)>,
}

fn methods_of(graph: &Graph, id: &NodeId) -> Vec<NodeId> {
    match graph.node(id) {
        Some(Node::Method(m)) => alloc::vec![m.id.clone()],
        Some(Node::Paper(p)) => graph.methods_introduced_by(&p.id).to_vec(),
        _ => Vec::new(),
    }
}

/// Method-level relations implied by the graph's causal edges, without seeds
/// and without the acyclicity check.
///
/// extends/improves map to `variant_of`, adapts/replaces to `specializes`,
/// uses_component to `component_of` with the endpoints swapped; compares and
/// background are dropped. Paper endpoints stand for the methods they
/// introduce.
pub fn projected_relations(graph: &Graph) -> BTreeSet<(NodeId, NodeId, MethodRelation)> {
    let mut out = BTreeSet::new();
    for e in graph.edges() {
        let (relation, swap) = match e.edge_type {
            EdgeType::Extends | EdgeType::Improves => (MethodRelation::VariantOf, false),
            EdgeType::Adapts | EdgeType::Replaces => (MethodRelation::Specializes, false),
            EdgeType::UsesComponent => (MethodRelation::ComponentOf, true),
            EdgeType::Compares | EdgeType::Background => continue,
        };
        for s in methods_of(graph, &e.source) {
            for t in methods_of(graph, &e.target) {
                if s == t {
                    continue;
                }
                if swap {
                    out.insert((t.clone(), s.clone(), relation));
                } else {
                    out.insert((s.clone(), t.clone(), relation));
                }
            }
        }
    }
    out
}

/// Builds the method-level DAG from projection plus curated seeds, failing on
/// any directed cycle.
pub fn project_method_dag(graph: &Graph, seeds: &[MethodSeed]) -> Result<MethodDag, MethodDagError> {
    let dag = MethodDag::lenient(graph, seeds)?;
    let pairs: Vec<(&NodeId, &NodeId)> = dag.edges.iter().map(|(s, t, _)| (s, t)).collect();
    if let Some(cycle) = find_cycle(&pairs) {
        return Err(MethodDagError::Cycle { cycle });
    }
    Ok(dag)
}

impl MethodDag {
    /// Projection plus seeds with seed validation but no cycle check; used by
    /// scorers that only need undirected distances.
    pub fn lenient(graph: &Graph, seeds: &[MethodSeed]) -> Result<Self, MethodDagError> {
        let mut edges = projected_relations(graph);
        for seed in seeds {
            if !seed.relation.is_curated_only() {
                return Err(MethodDagError::SeedNotCurated { relation: seed.relation });
            }
            for id in [&seed.source, &seed.target] {
                if graph.method(id).is_none() {
                    return Err(MethodDagError::SeedNotMethod { id: id.clone() });
                }
            }
            edges.insert((seed.source.clone(), seed.target.clone(), seed.relation));
        }
        let nodes = graph.methods().map(|m| m.id.clone()).collect();
        Ok(Self { nodes, edges })
    }

    /// Shortest undirected hop distance between two methods, searching at most
    /// `max` hops.
    pub fn undirected_distance(&self, a: &NodeId, b: &NodeId, max: usize) -> Option<usize> {
        if a == b {
            return Some(0);
        }
        let mut adj: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
        for (s, t, _) in &self.edges {
            adj.entry(s).or_default().insert(t);
            adj.entry(t).or_default().insert(s);
        }
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([(a, 0usize)]);
        while let Some((n, d)) = queue.pop_front() {
            if d == max {
                continue;
            }
            for &next in adj.get(n).into_iter().flatten() {
                if next == b {
                    return Some(d + 1);
                }
                if seen.insert(next) {
                    queue.push_back((next, d + 1));
                }
            }
        }
        None
    }
}
