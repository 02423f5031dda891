use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alias::AliasRegistry;
use crate::graph::{Graph, NodeId};
use crate::text::content_words;

/// One paper prepared for retrieval.
#[derive(Clone, Debug)]
pub struct PaperDoc {
    pub id: NodeId,
    /// Content words of title, abstract and sections.
    pub tokens: Vec<String>,
    /// Mention count per resolved method.
    pub mentions: BTreeMap<NodeId, u32>,
    /// Text compared by the duplicate detector: the abstract, or the title
    /// when there is no abstract.
    pub summary: String,
}

/// Graph plus registry with per-paper lexical and mention indexes.
pub struct Corpus<'g> {
    pub graph: &'g Graph,
    pub registry: &'g AliasRegistry,
    docs: Vec<PaperDoc>,
    paper_counts: BTreeMap<NodeId, u32>,
    co_use: BTreeMap<(NodeId, NodeId), u32>,
}

fn ordered(a: &NodeId, b: &NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl<'g> Corpus<'g> {
    pub fn build(graph: &'g Graph, registry: &'g AliasRegistry) -> Self {
        let mut docs = Vec::new();
        let mut paper_counts: BTreeMap<NodeId, u32> = BTreeMap::new();
        let mut co_use: BTreeMap<(NodeId, NodeId), u32> = BTreeMap::new();
        for p in graph.papers() {
            let text = p.full_text();
            let mut mentions: BTreeMap<NodeId, u32> = BTreeMap::new();
            for m in registry.resolve_mentions(&text) {
                *mentions.entry(m.method).or_insert(0) += 1;
            }
            for m in mentions.keys() {
                *paper_counts.entry(m.clone()).or_insert(0) += 1;
            }
            let ms: Vec<&NodeId> = mentions.keys().collect();
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    *co_use.entry(ordered(ms[i], ms[j])).or_insert(0) += 1;
                }
            }
            let summary = if p.abstract_text.is_empty() { p.title.clone() } else { p.abstract_text.clone() };
            docs.push(PaperDoc { id: p.id.clone(), tokens: content_words(&text), mentions, summary });
        }
        Self { graph, registry, docs, paper_counts, co_use }
    }

    pub fn docs(&self) -> &[PaperDoc] {
        &self.docs
    }

    pub fn doc(&self, id: &NodeId) -> Option<&PaperDoc> {
        self.docs.binary_search_by(|d| d.id.cmp(id)).ok().map(|i| &self.docs[i])
    }

    /// Paper count of a method: the node's override when present, else the
    /// number of papers whose text mentions it.
    pub fn paper_count(&self, method: &NodeId) -> u32 {
        self.graph
            .method(method)
            .and_then(|m| m.paper_count)
            .unwrap_or_else(|| self.paper_counts.get(method).copied().unwrap_or(0))
    }

    /// Number of papers mentioning both methods.
    pub fn co_use_count(&self, a: &NodeId, b: &NodeId) -> u32 {
        self.co_use.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    pub fn co_utilized(&self, a: &NodeId, b: &NodeId) -> bool {
        self.co_use_count(a, b) > 0
    }
}
