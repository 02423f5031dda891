//! Alias registry: maps free-text surface forms to canonical method nodes.
//!
//! Surfaces are compared after [`normalize_surface`]. Matching runs over the
//! normalized token stream, so word boundaries are token boundaries and a
//! surface never matches inside a longer word. Among overlapping candidates
//! the longest surface wins. A registered surface followed by a version
//! suffix token (`v2`, `large`, ...) consolidates to its parent method unless
//! the suffixed form is itself registered. Negative-listed surfaces never
//! match.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};

pub const DEFAULT_VERSION_SUFFIXES: [&str; 7] = ["v2", "v3", "large", "base", "small", "xl", "turbo"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("surface `{surface}` claimed by both `{first}` and `{second}`")]
    AmbiguousSurface { surface: String, first: NodeId, second: NodeId },
    #[error("method `{method}` has a surface that normalizes to nothing")]
    EmptySurface { method: NodeId },
}

/// A resolved method mention. `span` is a byte range of the raw input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub method: NodeId,
    pub surface: String,
    pub span: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token {
    text: String,
    start: usize,
    end: usize,
}

/// Splits on whitespace, `-` and `_`; other punctuation is deleted in place;
/// letters are lowercased. Offsets refer to the first and last kept char.
fn tokenize(raw: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut cur: Option<Token> = None;
    for (i, ch) in raw.char_indices() {
        if ch.is_whitespace() || ch == '-' || ch == '_' {
            if let Some(t) = cur.take() {
                out.push(t);
            }
        } else if ch.is_alphanumeric() {
            let t = cur.get_or_insert_with(|| Token { text: String::new(), start: i, end: i });
            t.text.extend(ch.to_lowercase());
            t.end = i + ch.len_utf8();
        }
    }
    if let Some(t) = cur {
        out.push(t);
    }
    out
}

fn join(tokens: &[Token]) -> String {
    let mut s = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&t.text);
    }
    s
}

/// Lowercase; hyphens and underscores become spaces; other punctuation is
/// removed; whitespace runs collapse to one space; ends are trimmed.
pub fn normalize_surface(raw: &str) -> String {
    join(&tokenize(raw))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AliasRegistry {
    surfaces: BTreeMap<String, NodeId>,
    negatives: BTreeMap<String, String>,
    suffixes: BTreeSet<String>,
    max_tokens: usize,
}

impl AliasRegistry {
    pub fn new() -> Self {
        Self { suffixes: DEFAULT_VERSION_SUFFIXES.iter().map(|s| String::from(*s)).collect(), ..Default::default() }
    }

    /// Registry seeded with every method's canonical name.
    pub fn from_graph(graph: &Graph) -> Result<Self, RegistryError> {
        let mut reg = Self::new();
        for m in graph.methods() {
            reg.add_surface(&m.id, &m.canonical_name)?;
        }
        Ok(reg)
    }

    pub fn add_surface(&mut self, method: &NodeId, raw: &str) -> Result<(), RegistryError> {
        let surface = normalize_surface(raw);
        if surface.is_empty() {
            return Err(RegistryError::EmptySurface { method: method.clone() });
        }
        match self.surfaces.get(&surface) {
            Some(existing) if existing != method => {
                Err(RegistryError::AmbiguousSurface { surface, first: existing.clone(), second: method.clone() })
            }
            Some(_) => Ok(()),
            None => {
                self.max_tokens = self.max_tokens.max(surface.split(' ').count());
                self.surfaces.insert(surface, method.clone());
                Ok(())
            }
        }
    }

    pub fn add_negative(&mut self, raw: &str, note: &str) {
        let surface = normalize_surface(raw);
        self.max_tokens = self.max_tokens.max(surface.split(' ').count());
        self.negatives.insert(surface, note.into());
    }

    pub fn set_version_suffixes<'a>(&mut self, suffixes: impl IntoIterator<Item = &'a str>) {
        self.suffixes = suffixes.into_iter().map(normalize_surface).collect();
    }

    pub fn surface_count(&self) -> usize {
        self.surfaces.len()
    }

    /// Registered surfaces of one method, normalized.
    pub fn surfaces_of<'a>(&'a self, method: &'a NodeId) -> impl Iterator<Item = &'a str> + 'a {
        self.surfaces.iter().filter(move |(_, m)| *m == method).map(|(s, _)| s.as_str())
    }

    pub fn negatives(&self) -> impl Iterator<Item = (&str, &str)> {
        self.negatives.iter().map(|(s, n)| (s.as_str(), n.as_str()))
    }

    fn resolve_surface(&self, surface: &str) -> Option<&NodeId> {
        if self.negatives.contains_key(surface) {
            return None;
        }
        self.surfaces.get(surface)
    }

    /// Exact lookup of a whole name, with version-suffix consolidation.
    pub fn lookup(&self, name: &str) -> Option<&NodeId> {
        let surface = normalize_surface(name);
        if let Some(m) = self.resolve_surface(&surface) {
            return Some(m);
        }
        if self.negatives.contains_key(&surface) {
            return None;
        }
        let (parent, last) = surface.rsplit_once(' ')?;
        if self.suffixes.contains(last) {
            self.resolve_surface(parent)
        } else {
            None
        }
    }

    /// All non-overlapping method mentions in `text`, ordered by span start.
    pub fn resolve_mentions(&self, text: &str) -> Vec<Mention> {
        struct Candidate<'a> {
            start: usize,
            len: usize,
            surface: String,
            /// `None` for a negative surface: it claims its span but emits nothing.
            method: Option<&'a NodeId>,
            exact: bool,
        }

        let tokens = tokenize(text);
        let mut candidates = Vec::new();
        for start in 0..tokens.len() {
            let longest = self.max_tokens.min(tokens.len() - start);
            for len in 1..=longest {
                let surface = join(&tokens[start..start + len]);
                if self.negatives.contains_key(&surface) {
                    candidates.push(Candidate { start, len, surface, method: None, exact: true });
                    continue;
                }
                let Some(method) = self.surfaces.get(&surface) else { continue };
                if let Some(next) = tokens.get(start + len) {
                    if self.suffixes.contains(&next.text) {
                        let mut extended = surface.clone();
                        extended.push(' ');
                        extended.push_str(&next.text);
                        if !self.surfaces.contains_key(&extended) && !self.negatives.contains_key(&extended) {
                            candidates.push(Candidate {
                                start,
                                len: len + 1,
                                surface: extended,
                                method: Some(method),
                                exact: false,
                            });
                        }
                    }
                }
                candidates.push(Candidate { start, len, surface, method: Some(method), exact: true });
            }
        }

        candidates.sort_by(|a, b| {
            b.surface
                .chars()
                .count()
                .cmp(&a.surface.chars().count())
                .then_with(|| b.exact.cmp(&a.exact))
                .then_with(|| a.start.cmp(&b.start))
        });
        let mut taken = alloc::vec![false; tokens.len()];
        let mut out = Vec::new();
        for c in candidates {
            let range = c.start..c.start + c.len;
            if taken[range.clone()].iter().any(|&t| t) {
                continue;
            }
            taken[range].iter_mut().for_each(|t| *t = true);
            let Some(method) = c.method else { continue };
            out.push(Mention {
                method: method.clone(),
                span: (tokens[c.start].start, tokens[c.start + c.len - 1].end),
                surface: c.surface,
            });
        }
        out.sort_by_key(|m| m.span.0);
        out
    }

    /// Distinct mentioned methods in order of first mention.
    pub fn methods_in(&self, text: &str) -> Vec<NodeId> {
        let mut seen = BTreeSet::new();
        self.resolve_mentions(text).into_iter().filter(|m| seen.insert(m.method.clone())).map(|m| m.method).collect()
    }
}
