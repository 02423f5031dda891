//! Embedding and rerank ports, plus deterministic doubles that let the whole
//! duplicate-risk stack run without models.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::text::{content_words, jaccard, words};

pub trait EmbeddingProvider {
    fn dim(&self) -> usize;
    /// Same text must give the same vector of length [`Self::dim`].
    fn embed(&self, text: &str) -> Vec<f64>;
}

pub trait RerankProvider {
    /// Relevance logit of `candidate` for `query`.
    fn score(&self, query: &str, candidate: &str) -> f64;
}

/// Cosine similarity; zero vectors give 0.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = libm::sqrt(a.iter().map(|x| x * x).sum());
    let nb = libm::sqrt(b.iter().map(|x| x * x).sum());
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(-1.0, 1.0)
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Signed feature hashing of lowercase words into `dim` buckets, L2
/// normalized. Identical texts embed identically; texts sharing no words are
/// orthogonal up to bucket collisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HashEmbedder {
    pub dim: usize,
    pub seed: u64,
}

impl Default for HashEmbedder {
    fn default() -> Self {
        Self { dim: 384, seed: 0 }
    }
}

impl EmbeddingProvider for HashEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for w in words(text) {
            let h = fnv1a(self.seed, w.as_bytes());
            let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
            v[(h % self.dim as u64) as usize] += sign;
        }
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

/// Logit = `scale`·Jaccard(content words) − `offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LexicalReranker {
    pub scale: f64,
    pub offset: f64,
}

impl Default for LexicalReranker {
    fn default() -> Self {
        Self { scale: 12.0, offset: 6.0 }
    }
}

impl RerankProvider for LexicalReranker {
    fn score(&self, query: &str, candidate: &str) -> f64 {
        let q: BTreeSet<_> = content_words(query).into_iter().collect();
        let c: BTreeSet<_> = content_words(candidate).into_iter().collect();
        self.scale * jaccard(&q, &c) - self.offset
    }
}
