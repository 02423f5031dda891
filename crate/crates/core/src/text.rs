//! Shared lexical helpers: lowercase alphanumeric tokenization and the
//! stop-word list used for BM25 and lexical overlap signals.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// Common English function words dropped from content-word tokenizations.
pub const STOP_WORDS: &[&str] = &[
    "a", "about", "an", "and", "are", "as", "at", "be", "been", "but", "by", "can", "do", "does", "for", "from", "had",
    "has", "have", "how", "if", "in", "into", "is", "it", "its", "may", "more", "most", "not", "of", "on", "or", "our",
    "over", "such", "than", "that", "the", "their", "them", "then", "these", "they", "this", "those", "to", "via",
    "was", "we", "were", "what", "when", "which", "while", "will", "with",
];

pub fn is_stop_word(word: &str) -> bool {
    STOP_WORDS.binary_search(&word).is_ok()
}

/// Lowercase and split on every non-alphanumeric character.
pub fn words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(core::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// [`words`] with stop words removed.
pub fn content_words(text: &str) -> Vec<String> {
    words(text).into_iter().filter(|w| !is_stop_word(w)).collect()
}

/// Adjacent pairs of content words.
pub fn content_bigrams(text: &str) -> BTreeSet<(String, String)> {
    let ws = content_words(text);
    ws.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

/// Jaccard similarity of two token sets; two empty sets score 0.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}
