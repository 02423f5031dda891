use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::bm25::{bm25_rank, Bm25Params};
use super::corpus::Corpus;
use crate::graph::{BottleneckDimension, Edge, EdgeKey, NodeId};
use crate::text::content_words;

/// How alias hits and BM25 combine into the paper ranking.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HybridMode {
    /// Alias-mention count first, BM25 breaks ties.
    Lexicographic,
    /// `alias_weight · count + bm25`.
    Additive { alias_weight: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetrievalConfig {
    pub k: usize,
    pub bm25: Bm25Params,
    pub hybrid: HybridMode,
}

impl Default for RetrievalConfig {
    fn default() -> Self {
        Self { k: 500, bm25: Bm25Params::default(), hybrid: HybridMode::Lexicographic }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedPaper {
    pub id: NodeId,
    pub alias_hits: u32,
    pub bm25: f64,
}

/// Bottleneck side of an evidence record, with the edge it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BottleneckView {
    pub edge: EdgeKey,
    pub quote: String,
    pub description: String,
    pub dimension: BottleneckDimension,
}

/// Localized retrieval context: methods, ranked papers, incident causal
/// edges and their bottlenecks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Context {
    pub methods: Vec<NodeId>,
    pub papers: Vec<RankedPaper>,
    pub edges: Vec<Edge>,
    pub bottlenecks: Vec<BottleneckView>,
}

impl Context {
    pub fn paper_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.papers.iter().map(|p| &p.id)
    }
}

/// Text with every resolved mention blanked out.
fn strip_mentions(text: &str, spans: &[(usize, usize)]) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for &(s, e) in spans {
        out.push_str(&text[last..s]);
        out.push(' ');
        last = e;
    }
    out.push_str(&text[last..]);
    out
}

pub fn retrieve_context(x: &str, corpus: &Corpus<'_>, config: &RetrievalConfig) -> Context {
    let mentions = corpus.registry.resolve_mentions(x);
    let mut seen = BTreeSet::new();
    let methods: Vec<NodeId> =
        mentions.iter().filter(|m| seen.insert(m.method.clone())).map(|m| m.method.clone()).collect();
    let spans: Vec<(usize, usize)> = mentions.iter().map(|m| m.span).collect();
    let query = content_words(&strip_mentions(x, &spans));

    let docs = corpus.docs();
    let lexical: Vec<(usize, Vec<String>)> = docs.iter().enumerate().map(|(i, d)| (i, d.tokens.clone())).collect();
    let mut bm25 = alloc::vec![0.0; docs.len()];
    if !docs.is_empty() {
        for (i, s) in bm25_rank(&query, &lexical, config.bm25) {
            bm25[i] = s;
        }
    }

    let mut ranked: Vec<RankedPaper> = docs
        .iter()
        .enumerate()
        .map(|(i, d)| RankedPaper {
            id: d.id.clone(),
            alias_hits: methods.iter().map(|m| d.mentions.get(m).copied().unwrap_or(0)).sum(),
            bm25: bm25[i],
        })
        .filter(|p| p.alias_hits > 0 || p.bm25 > 0.0)
        .collect();
    match config.hybrid {
        HybridMode::Lexicographic => ranked.sort_by(|a, b| {
            b.alias_hits.cmp(&a.alias_hits).then_with(|| b.bm25.total_cmp(&a.bm25)).then_with(|| a.id.cmp(&b.id))
        }),
        HybridMode::Additive { alias_weight } => ranked.sort_by(|a, b| {
            let sa = alias_weight * a.alias_hits as f64 + a.bm25;
            let sb = alias_weight * b.alias_hits as f64 + b.bm25;
            sb.total_cmp(&sa).then_with(|| a.id.cmp(&b.id))
        }),
    }
    ranked.truncate(config.k);

    let in_context: BTreeSet<&NodeId> = ranked.iter().map(|p| &p.id).collect();
    let graph = corpus.graph;
    let edges: Vec<Edge> = graph
        .edges()
        .iter()
        .filter(|e| e.edge_type.is_causal())
        .filter(|e| {
            [&e.source, &e.target].into_iter().any(|n| graph.paper_of(n).is_some_and(|p| in_context.contains(p)))
        })
        .cloned()
        .collect();
    let bottlenecks = edges
        .iter()
        .filter_map(|e| {
            e.evidence.as_ref().map(|ev| BottleneckView {
                edge: e.key(),
                quote: ev.bottleneck_quote.clone(),
                description: ev.bottleneck_description.clone(),
                dimension: ev.bottleneck_dimension,
            })
        })
        .collect();

    Context { methods, papers: ranked, edges, bottlenecks }
}
