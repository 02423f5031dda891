//! Shared retrieval: BM25, rank fusion, localized context and duplicate risk.

mod bm25;
mod context;
mod corpus;
mod duplicate;
mod fusion;
mod providers;

pub use bm25::{bm25_rank, Bm25Params};
pub use context::{retrieve_context, BottleneckView, Context, HybridMode, RankedPaper, RetrievalConfig};
pub use corpus::{Corpus, PaperDoc};
pub use duplicate::{dense_similarity, duplicate_risk, CandidateScore, DuplicateConfig, DuplicateVerdict};
pub use fusion::{rrf_fuse, sigmoid, step_penalty, DomainError, STEP_PENALTIES};
pub use providers::{cosine, fnv1a, EmbeddingProvider, HashEmbedder, LexicalReranker, RerankProvider};

#[cfg(test)]
mod tests;
