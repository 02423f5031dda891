//! Okapi BM25 over pre-tokenized documents.
//!
//! score(D, Q) = Σ_q idf(q) · tf(q, D)·(k1 + 1) / (tf(q, D) + k1·(1 − b + b·|D|/avgdl))
//! with idf(q) = ln((N − df(q) + 0.5) / (df(q) + 0.5) + 1), which stays positive
//! for terms present in every document.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.5, b: 0.75 }
    }
}

/// Scores every document and returns them in descending score order, ties by
/// id. Repeated query terms contribute once per occurrence. An empty query
/// yields all-zero scores ordered by id.
pub fn bm25_rank<I: Ord + Clone>(
    query_terms: &[String],
    corpus: &[(I, Vec<String>)],
    params: Bm25Params,
) -> Vec<(I, f64)> {
    let n = corpus.len() as f64;
    let total_len: usize = corpus.iter().map(|(_, d)| d.len()).sum();
    let avgdl = if corpus.is_empty() { 0.0 } else { total_len as f64 / n };

    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for q in query_terms {
        df.entry(q.as_str()).or_insert(0);
    }
    let mut term_freqs: Vec<BTreeMap<&str, usize>> = Vec::with_capacity(corpus.len());
    for (_, doc) in corpus {
        let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
        for w in doc {
            if df.contains_key(w.as_str()) {
                *tf.entry(w.as_str()).or_insert(0) += 1;
            }
        }
        for term in tf.keys() {
            *df.get_mut(term).unwrap() += 1;
        }
        term_freqs.push(tf);
    }

    let mut scored: Vec<(I, f64)> = corpus
        .iter()
        .zip(&term_freqs)
        .map(|((id, doc), tf)| {
            let norm = if avgdl > 0.0 { doc.len() as f64 / avgdl } else { 1.0 };
            let score = query_terms
                .iter()
                .map(|q| {
                    let f = *tf.get(q.as_str()).unwrap_or(&0) as f64;
                    if f == 0.0 {
                        return 0.0;
                    }
                    let d = df[q.as_str()] as f64;
                    let idf = libm::log((n - d + 0.5) / (d + 0.5) + 1.0);
                    idf * f * (params.k1 + 1.0) / (f + params.k1 * (1.0 - params.b + params.b * norm))
                })
                .sum();
            (id.clone(), score)
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored
}
