//! Reciprocal rank fusion and the duplicate-similarity step penalty.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
#[error("similarity {0} outside [0, 1]")]
pub struct DomainError(pub f64);

/// Fuses rankings with Σ 1/(k + rank), ranks 1-based. Ids absent from a
/// ranking get nothing from it. Output is descending by score, ties by id.
pub fn rrf_fuse<I: Ord + Clone>(rankings: &[Vec<I>], k_rrf: u32) -> Vec<(I, f64)> {
    let mut scores: BTreeMap<I, f64> = BTreeMap::new();
    for ranking in rankings {
        for (pos, id) in ranking.iter().enumerate() {
            *scores.entry(id.clone()).or_insert(0.0) += 1.0 / (k_rrf as f64 + (pos + 1) as f64);
        }
    }
    let mut out: Vec<(I, f64)> = scores.into_iter().collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// (threshold, penalty), checked highest first.
pub const STEP_PENALTIES: [(f64, f64); 4] = [(0.85, -4.0), (0.75, -2.5), (0.65, -1.5), (0.55, -0.5)];

pub fn step_penalty(similarity: f64) -> Result<f64, DomainError> {
    if !(0.0..=1.0).contains(&similarity) {
        return Err(DomainError(similarity));
    }
    Ok(STEP_PENALTIES.iter().find(|(t, _)| similarity >= *t).map_or(0.0, |&(_, p)| p))
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-x))
}
