use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// Identifier shared by papers, methods and stubs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        Self(s.into())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The seven citation relations, ordered by decreasing causal strength.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeType {
    Extends,
    Improves,
    Replaces,
    Adapts,
    UsesComponent,
    Compares,
    Background,
}

impl EdgeType {
    pub const ALL: [EdgeType; 7] = [
        EdgeType::Extends,
        EdgeType::Improves,
        EdgeType::Replaces,
        EdgeType::Adapts,
        EdgeType::UsesComponent,
        EdgeType::Compares,
        EdgeType::Background,
    ];

    /// Member of the strong-causal subset that drives lineage traversal.
    pub fn is_strong(self) -> bool {
        matches!(self, Self::Extends | Self::Improves | Self::Replaces | Self::Adapts)
    }

    /// Anything but `background` carries an evidence record.
    pub fn is_causal(self) -> bool {
        self != Self::Background
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Extends => "extends",
            Self::Improves => "improves",
            Self::Replaces => "replaces",
            Self::Adapts => "adapts",
            Self::UsesComponent => "uses_component",
            Self::Compares => "compares",
            Self::Background => "background",
        }
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown tag `{0}`")]
pub struct UnknownTag(pub String);

impl FromStr for EdgeType {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| UnknownTag(s.into()))
    }
}

/// The 14-axis bottleneck taxonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BottleneckDimension {
    #[serde(rename = "computational complexity")]
    ComputationalComplexity,
    #[serde(rename = "memory efficiency")]
    MemoryEfficiency,
    #[serde(rename = "parallelization")]
    Parallelization,
    #[serde(rename = "accuracy")]
    Accuracy,
    #[serde(rename = "generalization")]
    Generalization,
    #[serde(rename = "scalability")]
    Scalability,
    #[serde(rename = "data efficiency")]
    DataEfficiency,
    #[serde(rename = "training stability")]
    TrainingStability,
    #[serde(rename = "inference speed")]
    InferenceSpeed,
    #[serde(rename = "expressiveness")]
    Expressiveness,
    #[serde(rename = "simplicity")]
    Simplicity,
    #[serde(rename = "robustness")]
    Robustness,
    #[serde(rename = "hyperparameter sensitivity")]
    HyperparameterSensitivity,
    #[serde(rename = "training complexity")]
    TrainingComplexity,
}

impl BottleneckDimension {
    pub const ALL: [BottleneckDimension; 14] = [
        Self::ComputationalComplexity,
        Self::MemoryEfficiency,
        Self::Parallelization,
        Self::Accuracy,
        Self::Generalization,
        Self::Scalability,
        Self::DataEfficiency,
        Self::TrainingStability,
        Self::InferenceSpeed,
        Self::Expressiveness,
        Self::Simplicity,
        Self::Robustness,
        Self::HyperparameterSensitivity,
        Self::TrainingComplexity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ComputationalComplexity => "computational complexity",
            Self::MemoryEfficiency => "memory efficiency",
            Self::Parallelization => "parallelization",
            Self::Accuracy => "accuracy",
            Self::Generalization => "generalization",
            Self::Scalability => "scalability",
            Self::DataEfficiency => "data efficiency",
            Self::TrainingStability => "training stability",
            Self::InferenceSpeed => "inference speed",
            Self::Expressiveness => "expressiveness",
            Self::Simplicity => "simplicity",
            Self::Robustness => "robustness",
            Self::HyperparameterSensitivity => "hyperparameter sensitivity",
            Self::TrainingComplexity => "training complexity",
        }
    }
}

impl fmt::Display for BottleneckDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BottleneckDimension {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|d| d.as_str() == s).ok_or_else(|| UnknownTag(s.into()))
    }
}

/// The (bottleneck, mechanism, trade-off, confidence) record carried by every
/// causal edge. Quote fields are verbatim spans of the citing paper.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub bottleneck_quote: String,
    pub bottleneck_description: String,
    pub bottleneck_dimension: BottleneckDimension,
    pub mechanism_quote: String,
    pub mechanism_description: String,
    pub tradeoff_sentence: String,
    pub improvement_dim: Option<BottleneckDimension>,
    pub sacrifice_dim: Option<BottleneckDimension>,
    pub confidence: f64,
}

/// Edges are stored as authored: `source` cites `target`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub edge_type: EdgeType,
    pub evidence: Option<EvidenceRecord>,
}

impl Edge {
    pub fn key(&self) -> EdgeKey {
        EdgeKey { source: self.source.clone(), target: self.target.clone(), edge_type: self.edge_type }
    }

    /// Evidence confidence, zero for background edges.
    pub fn confidence(&self) -> f64 {
        self.evidence.as_ref().map_or(0.0, |e| e.confidence)
    }

    /// The endpoint reached when walking this edge from `from`.
    pub fn other(&self, from: &NodeId) -> &NodeId {
        if &self.source == from {
            &self.target
        } else {
            &self.source
        }
    }
}

/// Deduplication and reference key of an edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey {
    pub source: NodeId,
    pub target: NodeId,
    pub edge_type: EdgeType,
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -[{}]-> {}", self.source, self.edge_type, self.target)
    }
}

/// The three body sections extraction reads from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sections {
    #[serde(default)]
    pub introduction: String,
    #[serde(default)]
    pub method: String,
    #[serde(default)]
    pub related_work: String,
}

impl Sections {
    pub fn is_empty(&self) -> bool {
        self.introduction.is_empty() && self.method.is_empty() && self.related_work.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperNode {
    pub id: NodeId,
    pub title: String,
    pub abstract_text: String,
    pub sections: Sections,
    pub year: Option<i32>,
}

impl PaperNode {
    /// Title, abstract and the three sections joined by newlines.
    pub fn full_text(&self) -> String {
        let parts = [
            self.title.as_str(),
            self.abstract_text.as_str(),
            self.sections.introduction.as_str(),
            self.sections.method.as_str(),
            self.sections.related_work.as_str(),
        ];
        let mut out = String::new();
        for p in parts.iter().filter(|p| !p.is_empty()) {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(p);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodNode {
    pub id: NodeId,
    pub canonical_name: String,
    pub introduced_by: Option<NodeId>,
    /// Overrides the paper count otherwise derived from alias mentions.
    pub paper_count: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StubNode {
    pub id: NodeId,
    pub title: String,
    pub year: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Paper(PaperNode),
    Method(MethodNode),
    Stub(StubNode),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Paper,
    Method,
    Stub,
}

impl Node {
    pub fn id(&self) -> &NodeId {
        match self {
            Node::Paper(p) => &p.id,
            Node::Method(m) => &m.id,
            Node::Stub(s) => &s.id,
        }
    }

    pub fn kind(&self) -> NodeKind {
        match self {
            Node::Paper(_) => NodeKind::Paper,
            Node::Method(_) => NodeKind::Method,
            Node::Stub(_) => NodeKind::Stub,
        }
    }

    /// Display label: paper/stub title or method canonical name.
    pub fn label(&self) -> &str {
        match self {
            Node::Paper(p) => &p.title,
            Node::Method(m) => &m.canonical_name,
            Node::Stub(s) => &s.title,
        }
    }
}

/// Traversal direction over stored (citing → cited) edges.
///
/// `Forward` follows influence from older to newer work (cited → citing);
/// `Backward` walks toward ancestors (citing → cited).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Self::Forward => Self::Backward,
            Self::Backward => Self::Forward,
        }
    }
}

/// Method-level relation vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodRelation {
    VariantOf,
    Specializes,
    ComponentOf,
    Optimizes,
    InspiredBy,
}

impl MethodRelation {
    /// Relations only introduced through curated seeds.
    pub fn is_curated_only(self) -> bool {
        matches!(self, Self::Optimizes | Self::InspiredBy)
    }
}

/// A curated method-level relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MethodSeed {
    pub source: NodeId,
    pub target: NodeId,
    pub relation: MethodRelation,
}
