use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Edge, EdgeKey, Graph, Node, NodeId};

/// Optional source-line annotation attached to load errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Line(pub Option<usize>);

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(n) => write!(f, "line {n}: "),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("{line}duplicate node id `{id}`")]
    DuplicateNode { id: NodeId, line: Line },
    #[error("{line}edge references unknown node `{id}`")]
    DanglingEndpoint { id: NodeId, line: Line },
    #[error("{line}causal edge {edge} has no evidence record")]
    MissingEvidence { edge: EdgeKey, line: Line },
    #[error("{line}background edge {edge} must not carry evidence")]
    UnexpectedEvidence { edge: EdgeKey, line: Line },
    #[error("{line}stub `{id}` cannot be an edge source")]
    StubSource { id: NodeId, line: Line },
    #[error("{line}year {year} of `{id}` outside 1900..=2100")]
    YearOutOfRange { id: NodeId, year: i32, line: Line },
    #[error("{line}confidence {value} of {edge} outside [0, 1]")]
    ConfidenceOutOfRange { edge: EdgeKey, value: f64, line: Line },
    #[error("{line}empty {field} on causal edge {edge}")]
    EmptyQuote { edge: EdgeKey, field: &'static str, line: Line },
    #[error("{line}method `{id}` has an empty canonical name")]
    EmptyCanonicalName { id: NodeId, line: Line },
    #[error("{line}canonical name `{name}` used by more than one method")]
    DuplicateCanonicalName { name: String, line: Line },
    #[error("{line}method `{id}` introduced_by `{paper}` which is not a paper")]
    BadIntroducedBy { id: NodeId, paper: NodeId, line: Line },
    #[error("strong-causal cycle: {}", join_ids(cycle))]
    StrongCycle { cycle: Vec<NodeId> },
    #[error("unknown node `{id}`")]
    UnknownNode { id: NodeId },
}

fn join_ids(ids: &[NodeId]) -> String {
    let mut s = String::new();
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            s.push_str(" -> ");
        }
        s.push_str(id.as_str());
    }
    s
}

/// Non-fatal observations made while building.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildWarning {
    /// A later edge with an already-seen (source, target, type) was dropped.
    DuplicateEdge { edge: EdgeKey, line: Option<usize> },
}

#[derive(Default)]
pub struct GraphBuilder {
    nodes: Vec<(Node, Option<usize>)>,
    edges: Vec<(Edge, Option<usize>)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: Node, line: Option<usize>) -> &mut Self {
        self.nodes.push((node, line));
        self
    }

    pub fn add_edge(&mut self, edge: Edge, line: Option<usize>) -> &mut Self {
        self.edges.push((edge, line));
        self
    }

    pub fn build(self) -> Result<(Graph, Vec<BuildWarning>), GraphError> {
        let mut nodes = BTreeMap::new();
        let mut names = BTreeSet::new();
        for (node, line) in &self.nodes {
            let line = Line(*line);
            let year = match node {
                Node::Paper(p) => p.year,
                Node::Stub(s) => s.year,
                Node::Method(m) => {
                    if m.canonical_name.trim().is_empty() {
                        return Err(GraphError::EmptyCanonicalName { id: m.id.clone(), line });
                    }
                    if !names.insert(m.canonical_name.clone()) {
                        return Err(GraphError::DuplicateCanonicalName { name: m.canonical_name.clone(), line });
                    }
                    None
                }
            };
            if let Some(y) = year {
                if !(1900..=2100).contains(&y) {
                    return Err(GraphError::YearOutOfRange { id: node.id().clone(), year: y, line });
                }
            }
            if nodes.insert(node.id().clone(), node.clone()).is_some() {
                return Err(GraphError::DuplicateNode { id: node.id().clone(), line });
            }
        }

        let mut introduced: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for (node, line) in &self.nodes {
            if let Node::Method(m) = node {
                if let Some(p) = &m.introduced_by {
                    if !matches!(nodes.get(p), Some(Node::Paper(_))) {
                        return Err(GraphError::BadIntroducedBy {
                            id: m.id.clone(),
                            paper: p.clone(),
                            line: Line(*line),
                        });
                    }
                    introduced.entry(p.clone()).or_default().push(m.id.clone());
                }
            }
        }

        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_index = BTreeMap::new();
        let mut warnings = Vec::new();
        for (edge, line) in self.edges {
            check_edge(&nodes, &edge, Line(line))?;
            let key = edge.key();
            if edge_index.contains_key(&key) {
                warnings.push(BuildWarning::DuplicateEdge { edge: key, line });
                continue;
            }
            edge_index.insert(key, edges.len());
            edges.push(edge);
        }

        let mut out_edges: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        let mut in_edges: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            out_edges.entry(e.source.clone()).or_default().push(i);
            in_edges.entry(e.target.clone()).or_default().push(i);
        }

        let strong: Vec<(&NodeId, &NodeId)> =
            edges.iter().filter(|e| e.edge_type.is_strong()).map(|e| (&e.source, &e.target)).collect();
        if let Some(cycle) = find_cycle(&strong) {
            return Err(GraphError::StrongCycle { cycle });
        }

        Ok((Graph { nodes, edges, edge_index, out_edges, in_edges, introduced }, warnings))
    }
}

fn check_edge(nodes: &BTreeMap<NodeId, Node>, edge: &Edge, line: Line) -> Result<(), GraphError> {
    for id in [&edge.source, &edge.target] {
        if !nodes.contains_key(id) {
            return Err(GraphError::DanglingEndpoint { id: id.clone(), line });
        }
    }
    if matches!(nodes.get(&edge.source), Some(Node::Stub(_))) {
        return Err(GraphError::StubSource { id: edge.source.clone(), line });
    }
    match (&edge.evidence, edge.edge_type.is_causal()) {
        (None, true) => return Err(GraphError::MissingEvidence { edge: edge.key(), line }),
        (Some(_), false) => return Err(GraphError::UnexpectedEvidence { edge: edge.key(), line }),
        (Some(ev), true) => {
            if !(0.0..=1.0).contains(&ev.confidence) {
                return Err(GraphError::ConfidenceOutOfRange { edge: edge.key(), value: ev.confidence, line });
            }
            for (field, text) in [("bottleneck_quote", &ev.bottleneck_quote), ("mechanism_quote", &ev.mechanism_quote)]
            {
                if text.is_empty() {
                    return Err(GraphError::EmptyQuote { edge: edge.key(), field, line });
                }
            }
        }
        (None, false) => {}
    }
    Ok(())
}

/// Returns one directed cycle if the edge list has any.
pub(crate) fn find_cycle<'a>(edges: &[(&'a NodeId, &'a NodeId)]) -> Option<Vec<NodeId>> {
    let mut adj: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
    for &(s, t) in edges {
        adj.entry(s).or_default().push(t);
        adj.entry(t).or_default();
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&NodeId, u8> = adj.keys().map(|&k| (k, 0)).collect();
    let roots: Vec<&NodeId> = adj.keys().copied().collect();
    for root in roots {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(&NodeId, usize)> = alloc::vec![(root, 0)];
        state.insert(root, 1);
        while let Some((node, idx)) = stack.last_mut() {
            let node = *node;
            let succ = &adj[node];
            if *idx < succ.len() {
                let next = succ[*idx];
                *idx += 1;
                match state[next] {
                    0 => {
                        state.insert(next, 1);
                        stack.push((next, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|(n, _)| *n == next).unwrap();
                        let mut cycle: Vec<NodeId> = stack[start..].iter().map(|(n, _)| (*n).clone()).collect();
                        cycle.push(next.clone());
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state.insert(node, 2);
                stack.pop();
            }
        }
    }
    None
}
