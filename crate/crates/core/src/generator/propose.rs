//! Proposer port, certificate verification and the template fallback.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::Cell;

use serde::{Deserialize, Serialize};

use super::{AxisEntry, GapSummary, GeneratorConfig, Strategy};
use crate::graph::{EdgeKey, EdgeType, Graph, NodeId};

/// Evidence certificate: an edge, its verbatim bottleneck quote and a
/// free-text justification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub edge_source: NodeId,
    pub edge_target: NodeId,
    pub edge_type: EdgeType,
    pub bottleneck_quote: String,
    pub justification: String,
}

impl Certificate {
    pub fn edge(&self) -> EdgeKey {
        EdgeKey { source: self.edge_source.clone(), target: self.edge_target.clone(), edge_type: self.edge_type }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposal {
    pub title: String,
    pub body: String,
    pub strategy: Strategy,
    pub certificate: Option<Certificate>,
    pub fallback: bool,
    /// Set only on the "insufficient context" proposal, which carries no
    /// certificate.
    #[serde(default, skip_serializing_if = "is_false")]
    pub degenerate: bool,
}

/// Why a proposer output was discarded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason", content = "detail")]
pub enum FallbackReason {
    EmptySummary,
    ProposerUnavailable(String),
    Unparseable(String),
    EmptyTitle,
    CertificateMismatch,
    CertificateOutsideSummary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationOutcome {
    pub proposal: Proposal,
    pub fallback_reason: Option<FallbackReason>,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProposerError {
    #[error("proposer unavailable: {0}")]
    Unavailable(String),
}

/// Text-in, text-out generation port.
pub trait Proposer {
    fn propose(&self, prompt: &str) -> Result<String, ProposerError>;
}

/// Replays canned responses in order; the last one repeats.
pub struct ScriptedProposer {
    responses: Vec<Result<String, ProposerError>>,
    next: Cell<usize>,
}

impl ScriptedProposer {
    pub fn new(responses: Vec<Result<String, ProposerError>>) -> Self {
        Self { responses, next: Cell::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.next.get()
    }
}

impl Proposer for ScriptedProposer {
    fn propose(&self, _prompt: &str) -> Result<String, ProposerError> {
        let i = self.next.get();
        self.next.set(i + 1);
        match self.responses.get(i.min(self.responses.len().saturating_sub(1))) {
            Some(r) => r.clone(),
            None => Err(ProposerError::Unavailable("no scripted response".into())),
        }
    }
}

/// True iff the edge exists, is causal and stores exactly this quote.
pub fn verify_certificate(certificate: &Certificate, graph: &Graph) -> bool {
    graph
        .edge(&certificate.edge())
        .filter(|e| e.edge_type.is_causal())
        .and_then(|e| e.evidence.as_ref())
        .is_some_and(|ev| ev.bottleneck_quote.as_bytes() == certificate.bottleneck_quote.as_bytes())
}

#[derive(Deserialize)]
struct RawProposal {
    title: String,
    body: String,
    certificate: Certificate,
}

/// Parses `{title, body, certificate}`, tolerating prose around the object.
pub fn parse_proposal(text: &str) -> Result<(String, String, Certificate), String> {
    let attempt = |s: &str| serde_json::from_str::<RawProposal>(s).map_err(|e| e.to_string());
    let raw = attempt(text.trim()).or_else(|first| match (text.find('{'), text.rfind('}')) {
        (Some(a), Some(b)) if a < b => attempt(&text[a..=b]).map_err(|_| first),
        _ => Err(first),
    })?;
    Ok((raw.title, raw.body, raw.certificate))
}

#[derive(Serialize)]
struct PromptEdge<'a> {
    source: &'a NodeId,
    target: &'a NodeId,
    edge_type: EdgeType,
    bottleneck_quote: &'a str,
}

#[derive(Serialize)]
struct PromptAxis<'a> {
    dimension: &'static str,
    edges: Vec<PromptEdge<'a>>,
}

#[derive(Serialize)]
struct PromptPair<'a> {
    a: &'a str,
    b: &'a str,
    edges: Vec<PromptEdge<'a>>,
}

#[derive(Serialize)]
struct PromptPayload<'a> {
    strategy: Strategy,
    instruction: &'static str,
    open_axes: Vec<PromptAxis<'a>>,
    recent_directions: Vec<PromptAxis<'a>>,
    sacrifice_axes: Vec<PromptAxis<'a>>,
    disconnected_pairs: Vec<PromptPair<'a>>,
    response_format: &'static str,
}

fn instruction(strategy: Strategy) -> &'static str {
    match strategy {
        Strategy::BottleneckResolution => "Propose a method that resolves one of the open bottleneck axes.",
        Strategy::TrendExtrapolation => "Propose the next step along one of the recent improvement directions.",
        Strategy::CrossPollination => "Propose a method that combines one of the disconnected method pairs.",
        Strategy::ParadigmChallenge => "Propose a method that avoids one of the repeatedly sacrificed dimensions.",
    }
}

fn prompt_edges<'a>(keys: &'a [EdgeKey], graph: &'a Graph) -> Vec<PromptEdge<'a>> {
    keys.iter()
        .filter_map(|k| {
            let ev = graph.edge(k)?.evidence.as_ref()?;
            Some(PromptEdge {
                source: &k.source,
                target: &k.target,
                edge_type: k.edge_type,
                bottleneck_quote: &ev.bottleneck_quote,
            })
        })
        .collect()
}

fn name_of<'a>(graph: &'a Graph, id: &'a NodeId) -> &'a str {
    graph.method(id).map_or(id.as_str(), |m| m.canonical_name.as_str())
}

/// The structured prompt: summary content only, plus the response schema.
pub fn build_prompt(summary: &GapSummary, strategy: Strategy, graph: &Graph) -> String {
    fn axes<'a>(list: &'a [AxisEntry], graph: &'a Graph) -> Vec<PromptAxis<'a>> {
        list.iter()
            .map(|a| PromptAxis { dimension: a.dimension.as_str(), edges: prompt_edges(&a.edges, graph) })
            .collect()
    }
    let payload = PromptPayload {
        strategy,
        instruction: instruction(strategy),
        open_axes: axes(&summary.open_axes, graph),
        recent_directions: axes(&summary.recent_directions, graph),
        sacrifice_axes: axes(&summary.sacrifice_axes, graph),
        disconnected_pairs: summary
            .disconnected_pairs
            .iter()
            .map(|p| PromptPair { a: name_of(graph, &p.a), b: name_of(graph, &p.b), edges: prompt_edges(&p.edges, graph) })
            .collect(),
        response_format: "{\"title\": str, \"body\": str, \"certificate\": {\"edge_source\": str, \"edge_target\": str, \"edge_type\": str, \"bottleneck_quote\": verbatim str, \"justification\": str}}",
    };
    serde_json::to_string(&payload).expect("prompt payload serializes")
}

/// Calls the proposer, retrying once on unparseable output, and falls back to
/// the template proposal on any failure. Always returns a valid proposal.
pub fn generate_proposal(
    summary: &GapSummary,
    strategy: Strategy,
    proposer: &dyn Proposer,
    graph: &Graph,
    config: &GeneratorConfig,
) -> GenerationOutcome {
    let fallback = |reason, attempts| GenerationOutcome {
        proposal: fallback_proposal(summary, strategy, graph),
        fallback_reason: Some(reason),
        attempts,
    };
    if summary.is_empty() {
        return fallback(FallbackReason::EmptySummary, 0);
    }
    let prompt = build_prompt(summary, strategy, graph);
    let max = config.max_attempts.max(1);
    let mut attempts = 0;
    let (title, body, certificate) = loop {
        attempts += 1;
        let text = match proposer.propose(&prompt) {
            Ok(t) => t,
            Err(e) => return fallback(FallbackReason::ProposerUnavailable(e.to_string()), attempts),
        };
        match parse_proposal(&text) {
            Ok(parsed) => break parsed,
            Err(e) if attempts >= max => return fallback(FallbackReason::Unparseable(e), attempts),
            Err(_) => continue,
        }
    };
    if title.trim().is_empty() {
        return fallback(FallbackReason::EmptyTitle, attempts);
    }
    if !verify_certificate(&certificate, graph) {
        return fallback(FallbackReason::CertificateMismatch, attempts);
    }
    if !summary.edge_refs().contains(&certificate.edge()) {
        return fallback(FallbackReason::CertificateOutsideSummary, attempts);
    }
    GenerationOutcome {
        proposal: Proposal {
            title,
            body,
            strategy,
            certificate: Some(certificate),
            fallback: false,
            degenerate: false,
        },
        fallback_reason: None,
        attempts,
    }
}

fn certificate_for(key: &EdgeKey, graph: &Graph, justification: String) -> Option<Certificate> {
    let ev = graph.edge(key).filter(|e| e.edge_type.is_causal())?.evidence.as_ref()?;
    Some(Certificate {
        edge_source: key.source.clone(),
        edge_target: key.target.clone(),
        edge_type: key.edge_type,
        bottleneck_quote: ev.bottleneck_quote.clone(),
        justification,
    })
}

/// Template proposal built purely from graph content.
///
/// Uses the top entry of `strategy`'s pattern (or of the first non-empty
/// pattern in declaration order) and certifies it with the entry's first
/// verifiable edge. An entry without such an edge borrows the first one found
/// anywhere in the summary; with none at all the proposal is degenerate.
pub fn fallback_proposal(summary: &GapSummary, strategy: Strategy, graph: &Graph) -> Proposal {
    let degenerate = |strategy| {
        Proposal {
        title: "Insufficient context".into(),
        body: "The retrieved context exposes no open axis, recent direction, sacrificed dimension or disconnected method pair, so no grounded proposal can be formed.".into(),
        strategy,
        certificate: None,
        fallback: true,
        degenerate: true,
    }
    };
    let Some(strategy) = core::iter::once(strategy).chain(Strategy::ALL).find(|s| summary.has_pattern(*s)) else {
        return degenerate(strategy);
    };
    let axis = |list: &[AxisEntry]| list[0].clone();
    let (title, body, edges) = match strategy {
        Strategy::BottleneckResolution => {
            let a = axis(&summary.open_axes);
            let d = a.dimension.as_str();
            (
                format!("Resolving the open {d} bottleneck"),
                format!("{} context edge(s) report a {d} bottleneck and no strong-causal edge in the context improves {d}. Target {d} directly while holding the other axes fixed.", a.edges.len()),
                a.edges,
            )
        }
        Strategy::ParadigmChallenge => {
            let a = axis(&summary.sacrifice_axes);
            let d = a.dimension.as_str();
            (
                format!("Challenging the repeated {d} sacrifice"),
                format!("{} context edge(s) trade away {d} for their gains. Seek a mechanism that keeps those gains without sacrificing {d}.", a.edges.len()),
                a.edges,
            )
        }
        Strategy::CrossPollination => {
            let p = summary.disconnected_pairs[0].clone();
            let (a, b) = (name_of(graph, &p.a), name_of(graph, &p.b));
            (
                format!("Cross-pollinating {a} and {b}"),
                format!("{a} and {b} are never used together and lie more than three method hops apart. Transfer the core mechanism of one into the other."),
                p.edges,
            )
        }
        Strategy::TrendExtrapolation => {
            let a = axis(&summary.recent_directions);
            let d = a.dimension.as_str();
            (
                format!("Extending the recent {d} trend"),
                format!(
                    "{} recent context edge(s) improve {d}. Extrapolate the trend one step further.",
                    a.edges.len()
                ),
                a.edges,
            )
        }
    };
    let all = summary.edge_refs();
    let certificate = edges.iter().chain(all.iter().copied()).find_map(|k| {
        certificate_for(k, graph, format!("The stored bottleneck of {k} grounds this {} proposal.", strategy.as_str()))
    });
    match certificate {
        Some(c) => Proposal { title, body, strategy, certificate: Some(c), fallback: true, degenerate: false },
        None => degenerate(strategy),
    }
}
