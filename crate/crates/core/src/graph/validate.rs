//! Deterministic post-checker for extracted causal edges.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Edge, EdgeKey, Graph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// A quoted span is not a substring of the citing text.
    QuoteMismatch { field: &'static str },
    /// The citing side predates the cited side beyond tolerance.
    Temporal { source_year: i32, target_year: i32 },
    /// The opposite-direction edge is already present.
    BidirectionalConflict,
}

impl RejectReason {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::QuoteMismatch { .. } => "quote-mismatch",
            Self::Temporal { .. } => "temporal",
            Self::BidirectionalConflict => "bidirectional-conflict",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::QuoteMismatch { field } => write!(f, "quote-mismatch ({field} not found in citing text)"),
            Self::Temporal { source_year, target_year } => {
                write!(f, "temporal (citing year {source_year} precedes cited year {target_year})")
            }
            Self::BidirectionalConflict => f.write_str("bidirectional-conflict"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Checks one causal edge against its citing text, the year map and the
/// edges accepted so far. Checks run in the order quotes, years, direction.
///
/// Background edges carry no quotes and are accepted on the quote check.
pub fn validate_edge(
    edge: &Edge,
    citing_text: &str,
    year_of: impl Fn(&NodeId) -> Option<i32>,
    existing: &[Edge],
    year_tolerance: i32,
) -> Verdict {
    if let Some(ev) = &edge.evidence {
        for (field, quote) in [
            ("bottleneck_quote", &ev.bottleneck_quote),
            ("mechanism_quote", &ev.mechanism_quote),
            ("tradeoff_sentence", &ev.tradeoff_sentence),
        ] {
            if !citing_text.contains(quote.as_str()) {
                return Verdict::Reject(RejectReason::QuoteMismatch { field });
            }
        }
    }
    if let (Some(source_year), Some(target_year)) = (year_of(&edge.source), year_of(&edge.target)) {
        if source_year < target_year - year_tolerance {
            return Verdict::Reject(RejectReason::Temporal { source_year, target_year });
        }
    }
    let reversed =
        existing.iter().any(|e| e.edge_type.is_causal() && e.source == edge.target && e.target == edge.source);
    if reversed {
        return Verdict::Reject(RejectReason::BidirectionalConflict);
    }
    Verdict::Accept
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PostCheckReport {
    pub accepted: Vec<EdgeKey>,
    pub rejected: Vec<(EdgeKey, RejectReason)>,
}

impl PostCheckReport {
    pub fn is_clean(&self) -> bool {
        self.rejected.is_empty()
    }
}

/// Runs [`validate_edge`] over every causal edge in stored order; each edge is
/// checked against the causal edges accepted before it.
pub fn post_check(graph: &Graph, year_tolerance: i32) -> PostCheckReport {
    let mut report = PostCheckReport::default();
    let mut accepted: Vec<Edge> = Vec::new();
    for edge in graph.edges().iter().filter(|e| e.edge_type.is_causal()) {
        let text: String = graph.citing_text(&edge.source).unwrap_or_default();
        match validate_edge(edge, &text, |id| graph.year_of(id), &accepted, year_tolerance) {
            Verdict::Accept => {
                report.accepted.push(edge.key());
                accepted.push(edge.clone());
            }
            Verdict::Reject(reason) => report.rejected.push((edge.key(), reason)),
        }
    }
    report
}
