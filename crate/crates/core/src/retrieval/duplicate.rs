//! Three-stage duplicate-risk detector.
//!
//! 1. Pool: dense cosine ranking and BM25 ranking fused with RRF; the top
//!    `pool_size` ids survive.
//! 2. Rerank: the rerank provider scores every pooled candidate.
//! 3. Fuse: `dense_weight·dense + (1 − dense_weight)·σ(logit)`, where dense is
//!    cosine mapped from [−1, 1] onto [0, 1].
//!
//! BM25 only influences which candidates are pooled.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::bm25::{bm25_rank, Bm25Params};
use super::corpus::Corpus;
use super::fusion::{rrf_fuse, sigmoid, step_penalty};
use super::providers::{cosine, EmbeddingProvider, RerankProvider};
use crate::graph::NodeId;
use crate::text::content_words;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DuplicateConfig {
    pub pool_size: usize,
    pub k_rrf: u32,
    pub bm25: Bm25Params,
    pub dense_weight: f64,
}

impl Default for DuplicateConfig {
    fn default() -> Self {
        Self { pool_size: 20, k_rrf: 60, bm25: Bm25Params::default(), dense_weight: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub id: NodeId,
    pub dense: f64,
    pub rerank_logit: f64,
    pub fused: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DuplicateVerdict {
    pub best_score: f64,
    /// Pooled candidates by descending fused score.
    pub top_candidates: Vec<(NodeId, f64)>,
    pub penalty: f64,
    pub candidates: Vec<CandidateScore>,
}

pub fn dense_similarity(a: &[f64], b: &[f64]) -> f64 {
    (cosine(a, b) + 1.0) / 2.0
}

pub fn duplicate_risk(
    idea: &str,
    corpus: &Corpus<'_>,
    embedder: &dyn EmbeddingProvider,
    reranker: &dyn RerankProvider,
    config: &DuplicateConfig,
) -> DuplicateVerdict {
    let docs = corpus.docs();
    if docs.is_empty() {
        return DuplicateVerdict::default();
    }
    let query_vec = embedder.embed(idea);
    let dense: Vec<f64> = docs.iter().map(|d| dense_similarity(&query_vec, &embedder.embed(&d.summary))).collect();

    let mut dense_rank: Vec<usize> = (0..docs.len()).collect();
    dense_rank.sort_by(|&a, &b| dense[b].total_cmp(&dense[a]).then_with(|| docs[a].id.cmp(&docs[b].id)));
    let lexical: Vec<(usize, Vec<String>)> = docs.iter().enumerate().map(|(i, d)| (i, d.tokens.clone())).collect();
    let sparse_rank: Vec<usize> = bm25_rank(&content_words(idea), &lexical, config.bm25)
        .into_iter()
        .filter(|(_, s)| *s > 0.0)
        .map(|(i, _)| i)
        .collect();
    let pool: Vec<usize> =
        rrf_fuse(&[dense_rank, sparse_rank], config.k_rrf).into_iter().take(config.pool_size).map(|(i, _)| i).collect();

    let mut candidates: Vec<CandidateScore> = pool
        .into_iter()
        .map(|i| {
            let logit = reranker.score(idea, &docs[i].summary);
            CandidateScore {
                id: docs[i].id.clone(),
                dense: dense[i],
                rerank_logit: logit,
                fused: config.dense_weight * dense[i] + (1.0 - config.dense_weight) * sigmoid(logit),
            }
        })
        .collect();
    candidates.sort_by(|a, b| b.fused.total_cmp(&a.fused).then_with(|| a.id.cmp(&b.id)));

    let best_score = candidates.first().map_or(0.0, |c| c.fused).clamp(0.0, 1.0);
    DuplicateVerdict {
        best_score,
        top_candidates: candidates.iter().map(|c| (c.id.clone(), c.fused)).collect(),
        penalty: step_penalty(best_score).unwrap_or(0.0),
        candidates,
    }
}
