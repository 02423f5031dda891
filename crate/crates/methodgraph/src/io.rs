//! JSONL/JSON readers and writers for graphs, aliases and method seeds.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use methodgraph_core::alias::RegistryError;
use methodgraph_core::graph::{BuildWarning, MethodNode, MethodSeed, NodeKind, PaperNode, Sections, StubNode};
use methodgraph_core::{
    AliasRegistry, BottleneckDimension, Edge, EdgeType, EvidenceRecord, Graph, GraphBuilder, GraphError, Node, NodeId,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: line {line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{}: {message}", path.display())]
    Json { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Graph { path: PathBuf, source: GraphError },
    #[error("{}: {source}", path.display())]
    Registry { path: PathBuf, source: RegistryError },
    #[error("{}: alias entry names unknown method `{id}`", path.display())]
    UnknownAliasMethod { path: PathBuf, id: String },
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.into(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| IoError::Io { path: dir.into(), source })?;
    }
    fs::write(path, text).map_err(|source| IoError::Io { path: path.into(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| IoError::Json { path: path.into(), message: e.to_string() })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
    s.push('\n');
    s
}

/// One compact JSON object per line.
pub fn to_jsonl<T: Serialize>(values: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&serde_json::to_string(&v).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Parses every non-blank line, returning records with 1-based line numbers.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>, IoError> {
    let text = read_text(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map(|v| (i + 1, v)).map_err(|e| IoError::Parse {
                path: path.into(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// A `nodes.jsonl` line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: NodeId,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub introduced_by: Option<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sections: Option<Sections>,
}

fn non_empty(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

impl NodeRecord {
    pub fn into_node(self) -> Result<Node, String> {
        let forbid = |present: bool, field: &str, kind: &str| {
            if present {
                Err(format!("field `{field}` is not allowed on a {kind} node"))
            } else {
                Ok(())
            }
        };
        match self.kind {
            NodeKind::Paper => {
                forbid(self.canonical_name.is_some(), "canonical_name", "paper")?;
                forbid(self.introduced_by.is_some(), "introduced_by", "paper")?;
                forbid(self.paper_count.is_some(), "paper_count", "paper")?;
                Ok(Node::Paper(PaperNode {
                    id: self.id,
                    title: self.title.unwrap_or_default(),
                    abstract_text: self.abstract_text.unwrap_or_default(),
                    sections: self.sections.unwrap_or_default(),
                    year: self.year,
                }))
            }
            NodeKind::Method => {
                forbid(self.abstract_text.is_some(), "abstract", "method")?;
                forbid(self.sections.is_some(), "sections", "method")?;
                forbid(self.year.is_some(), "year", "method")?;
                forbid(self.title.is_some(), "title", "method")?;
                let canonical_name = self.canonical_name.ok_or("method node needs `canonical_name`")?;
                Ok(Node::Method(MethodNode {
                    id: self.id,
                    canonical_name,
                    introduced_by: self.introduced_by,
                    paper_count: self.paper_count,
                }))
            }
            NodeKind::Stub => {
                forbid(self.abstract_text.is_some(), "abstract", "stub")?;
                forbid(self.sections.is_some(), "sections", "stub")?;
                forbid(self.canonical_name.is_some(), "canonical_name", "stub")?;
                forbid(self.introduced_by.is_some(), "introduced_by", "stub")?;
                forbid(self.paper_count.is_some(), "paper_count", "stub")?;
                Ok(Node::Stub(StubNode { id: self.id, title: self.title.unwrap_or_default(), year: self.year }))
            }
        }
    }

    pub fn from_node(node: &Node) -> Self {
        let mut r = NodeRecord {
            id: node.id().clone(),
            kind: node.kind(),
            title: None,
            abstract_text: None,
            canonical_name: None,
            introduced_by: None,
            paper_count: None,
            year: None,
            sections: None,
        };
        match node {
            Node::Paper(p) => {
                r.title = non_empty(&p.title);
                r.abstract_text = non_empty(&p.abstract_text);
                r.year = p.year;
                r.sections = (!p.sections.is_empty()).then(|| p.sections.clone());
            }
            Node::Method(m) => {
                r.canonical_name = Some(m.canonical_name.clone());
                r.introduced_by = m.introduced_by.clone();
                r.paper_count = m.paper_count;
            }
            Node::Stub(s) => {
                r.title = non_empty(&s.title);
                r.year = s.year;
            }
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottleneckRecord {
    pub quote: String,
    pub description: String,
    pub dimension: BottleneckDimension,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismRecord {
    pub quote: String,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpactRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub improvement_dim: Option<BottleneckDimension>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sacrifice_dim: Option<BottleneckDimension>,
    pub tradeoff_sentence: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceFileRecord {
    pub bottleneck: BottleneckRecord,
    pub mechanism: MechanismRecord,
    pub impact: ImpactRecord,
    pub confidence: f64,
}

/// An `edges.jsonl` line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub source: NodeId,
    pub target: NodeId,
    #[serde(rename = "type")]
    pub edge_type: EdgeType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceFileRecord>,
}

impl From<EdgeRecord> for Edge {
    fn from(r: EdgeRecord) -> Self {
        Edge {
            source: r.source,
            target: r.target,
            edge_type: r.edge_type,
            evidence: r.evidence.map(|e| EvidenceRecord {
                bottleneck_quote: e.bottleneck.quote,
                bottleneck_description: e.bottleneck.description,
                bottleneck_dimension: e.bottleneck.dimension,
                mechanism_quote: e.mechanism.quote,
                mechanism_description: e.mechanism.description,
                tradeoff_sentence: e.impact.tradeoff_sentence,
                improvement_dim: e.impact.improvement_dim,
                sacrifice_dim: e.impact.sacrifice_dim,
                confidence: e.confidence,
            }),
        }
    }
}

impl From<&Edge> for EdgeRecord {
    fn from(e: &Edge) -> Self {
        EdgeRecord {
            source: e.source.clone(),
            target: e.target.clone(),
            edge_type: e.edge_type,
            evidence: e.evidence.as_ref().map(|ev| EvidenceFileRecord {
                bottleneck: BottleneckRecord {
                    quote: ev.bottleneck_quote.clone(),
                    description: ev.bottleneck_description.clone(),
                    dimension: ev.bottleneck_dimension,
                },
                mechanism: MechanismRecord {
                    quote: ev.mechanism_quote.clone(),
                    description: ev.mechanism_description.clone(),
                },
                impact: ImpactRecord {
                    improvement_dim: ev.improvement_dim,
                    sacrifice_dim: ev.sacrifice_dim,
                    tradeoff_sentence: ev.tradeoff_sentence.clone(),
                },
                confidence: ev.confidence,
            }),
        }
    }
}

/// A loaded graph plus what the loader noticed along the way.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub warnings: Vec<BuildWarning>,
    pub seeds: Vec<MethodSeed>,
}

/// Which of the two files a builder error points into.
fn blame<'a>(err: &GraphError, nodes: &'a Path, edges: &'a Path) -> &'a Path {
    match err {
        GraphError::DuplicateNode { .. }
        | GraphError::YearOutOfRange { .. }
        | GraphError::EmptyCanonicalName { .. }
        | GraphError::DuplicateCanonicalName { .. }
        | GraphError::BadIntroducedBy { .. } => nodes,
        _ => edges,
    }
}

/// Loads and links a graph, rejecting the whole load on the first schema or
/// referential violation.
pub fn load_graph(nodes: &Path, edges: &Path, seeds: Option<&Path>) -> Result<LoadedGraph, IoError> {
    let mut b = GraphBuilder::new();
    for (line, rec) in read_jsonl::<NodeRecord>(nodes)? {
        let node = rec.into_node().map_err(|message| IoError::Parse { path: nodes.into(), line, message })?;
        b.add_node(node, Some(line));
    }
    for (line, rec) in read_jsonl::<EdgeRecord>(edges)? {
        b.add_edge(rec.into(), Some(line));
    }
    let (graph, warnings) =
        b.build().map_err(|source| IoError::Graph { path: blame(&source, nodes, edges).into(), source })?;
    let seeds = match seeds {
        Some(p) => read_jsonl::<MethodSeed>(p)?.into_iter().map(|(_, s)| s).collect(),
        None => Vec::new(),
    };
    Ok(LoadedGraph { graph, warnings, seeds })
}

/// Canonical `nodes.jsonl`: nodes in id order, empty fields omitted.
pub fn dump_nodes(graph: &Graph) -> String {
    to_jsonl(graph.nodes().map(NodeRecord::from_node))
}

/// Canonical `edges.jsonl`: edges in stored order.
pub fn dump_edges(graph: &Graph) -> String {
    to_jsonl(graph.edges().iter().map(EdgeRecord::from))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativeRecord {
    pub surface: String,
    #[serde(default)]
    pub note: String,
}

/// `aliases.json`: method id → surfaces, plus an optional `negatives` array.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AliasFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negatives: Vec<NegativeRecord>,
    #[serde(flatten)]
    pub surfaces: BTreeMap<String, Vec<String>>,
}

/// Registry seeded with canonical names, extended by `aliases` when given.
pub fn load_registry(
    graph: &Graph,
    aliases: Option<&Path>,
    version_suffixes: &[String],
) -> Result<AliasRegistry, IoError> {
    let path = aliases.map_or_else(PathBuf::new, Path::to_path_buf);
    let registry_err = |source| IoError::Registry { path: path.clone(), source };
    let mut reg = AliasRegistry::from_graph(graph).map_err(registry_err)?;
    reg.set_version_suffixes(version_suffixes.iter().map(String::as_str));
    let Some(p) = aliases else { return Ok(reg) };
    let file: AliasFile = read_json(p)?;
    for (id, surfaces) in &file.surfaces {
        let id = NodeId::from(id.as_str());
        if graph.method(&id).is_none() {
            return Err(IoError::UnknownAliasMethod { path: p.into(), id: id.to_string() });
        }
        for s in surfaces {
            reg.add_surface(&id, s).map_err(registry_err)?;
        }
    }
    for n in &file.negatives {
        reg.add_negative(&n.surface, &n.note);
    }
    Ok(reg)
}
