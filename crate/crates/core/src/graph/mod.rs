//! The typed heterogeneous graph and its derived views.
//!
//! A [`Graph`] is immutable once built. Construction goes through
//! [`GraphBuilder`], which enforces referential integrity, evidence presence
//! for causal edges, first-wins deduplication and acyclicity of the
//! strong-causal restriction.

mod builder;
mod method_dag;
mod types;
mod validate;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

pub use builder::{BuildWarning, GraphBuilder, GraphError};
pub use method_dag::{project_method_dag, projected_relations, MethodDag, MethodDagError};
pub use types::*;
pub use validate::{post_check, validate_edge, PostCheckReport, RejectReason, Verdict};

/// Accepts `year(source) >= year(target) - tolerance` on causal edges.
pub const DEFAULT_YEAR_TOLERANCE: i32 = 1;

#[derive(Clone, Debug)]
pub struct Graph {
    nodes: BTreeMap<NodeId, Node>,
    edges: Vec<Edge>,
    edge_index: BTreeMap<EdgeKey, usize>,
    out_edges: BTreeMap<NodeId, Vec<usize>>,
    in_edges: BTreeMap<NodeId, Vec<usize>>,
    introduced: BTreeMap<NodeId, Vec<NodeId>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Graph {
    pub fn empty() -> Self {
        GraphBuilder::new().build().expect("empty graph").0
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    /// All nodes in id order.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn papers(&self) -> impl Iterator<Item = &PaperNode> {
        self.nodes.values().filter_map(|n| match n {
            Node::Paper(p) => Some(p),
            _ => None,
        })
    }

    pub fn methods(&self) -> impl Iterator<Item = &MethodNode> {
        self.nodes.values().filter_map(|n| match n {
            Node::Method(m) => Some(m),
            _ => None,
        })
    }

    pub fn stubs(&self) -> impl Iterator<Item = &StubNode> {
        self.nodes.values().filter_map(|n| match n {
            Node::Stub(s) => Some(s),
            _ => None,
        })
    }

    pub fn paper(&self, id: &NodeId) -> Option<&PaperNode> {
        match self.nodes.get(id) {
            Some(Node::Paper(p)) => Some(p),
            _ => None,
        }
    }

    pub fn method(&self, id: &NodeId) -> Option<&MethodNode> {
        match self.nodes.get(id) {
            Some(Node::Method(m)) => Some(m),
            _ => None,
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&Edge> {
        self.edge_index.get(key).map(|&i| &self.edges[i])
    }

    /// Edges authored by `id` (it is the citing side).
    pub fn out_edges(&self, id: &NodeId) -> impl Iterator<Item = &Edge> {
        self.out_edges.get(id).into_iter().flatten().map(|&i| &self.edges[i])
    }

    /// Edges citing `id`.
    pub fn in_edges(&self, id: &NodeId) -> impl Iterator<Item = &Edge> {
        self.in_edges.get(id).into_iter().flatten().map(|&i| &self.edges[i])
    }

    /// Methods whose `introduced_by` is the given paper.
    pub fn methods_introduced_by(&self, paper: &NodeId) -> &[NodeId] {
        self.introduced.get(paper).map_or(&[], Vec::as_slice)
    }

    /// Publication year. Methods inherit the year of their introducing paper.
    pub fn year_of(&self, id: &NodeId) -> Option<i32> {
        match self.nodes.get(id)? {
            Node::Paper(p) => p.year,
            Node::Stub(s) => s.year,
            Node::Method(m) => m.introduced_by.as_ref().and_then(|p| self.year_of(p)),
        }
    }

    /// The paper whose text stands for this node: papers map to themselves,
    /// methods to their introducing paper, stubs to nothing.
    pub fn paper_of<'a>(&'a self, id: &'a NodeId) -> Option<&'a NodeId> {
        match self.nodes.get(id)? {
            Node::Paper(_) => Some(id),
            Node::Method(m) => m.introduced_by.as_ref(),
            Node::Stub(_) => None,
        }
    }

    /// Parsed text of the citing side of an edge authored by `id`.
    pub fn citing_text(&self, id: &NodeId) -> Option<String> {
        self.paper_of(id).and_then(|p| self.paper(p)).map(PaperNode::full_text)
    }

    /// Publication-year gap `year(citing) - year(cited)` of an edge.
    pub fn year_gap(&self, edge: &Edge) -> Option<i32> {
        Some(self.year_of(&edge.source)? - self.year_of(&edge.target)?)
    }

    /// Strong-causal neighbours of `node` in the given direction, ordered by
    /// descending evidence confidence and then neighbour id.
    pub fn strong_causal_successors(
        &self,
        node: &NodeId,
        direction: Direction,
    ) -> Result<Vec<(&Edge, &NodeId)>, GraphError> {
        if !self.contains(node) {
            return Err(GraphError::UnknownNode { id: node.clone() });
        }
        let edges: alloc::boxed::Box<dyn Iterator<Item = &Edge>> = match direction {
            Direction::Forward => alloc::boxed::Box::new(self.in_edges(node)),
            Direction::Backward => alloc::boxed::Box::new(self.out_edges(node)),
        };
        let mut out: Vec<(&Edge, &NodeId)> =
            edges.filter(|e| e.edge_type.is_strong()).map(|e| (e, e.other(node))).collect();
        out.sort_by(|a, b| {
            b.0.confidence()
                .total_cmp(&a.0.confidence())
                .then_with(|| a.1.cmp(b.1))
                .then_with(|| a.0.edge_type.cmp(&b.0.edge_type))
        });
        Ok(out)
    }

    /// Rebuilds the graph keeping only edges whose key is accepted by `keep`.
    pub fn retain_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> Graph {
        let mut b = GraphBuilder::new();
        for n in self.nodes.values() {
            b.add_node(n.clone(), None);
        }
        for e in self.edges.iter().filter(|e| keep(e)) {
            b.add_edge(e.clone(), None);
        }
        b.build().expect("subset of a valid graph is valid").0
    }
}
