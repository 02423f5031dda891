//! Per-dimension signal extractors and the fixed piecewise curves.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{DimensionScores, EvaluatorConfig, IdeaProfile, Signal};
use crate::alias::AliasRegistry;
use crate::graph::{Direction, EdgeType, Graph, MethodDag, NodeId};
use crate::retrieval::{Context, Corpus, DuplicateVerdict};
use crate::text::{content_bigrams, content_words, jaccard, word_count, words};

/// Sweet-spot maturity curve over a method's paper count.
pub fn feasibility_maturity_curve(paper_count: u32) -> f64 {
    let pc = paper_count as f64;
    if pc <= 500.0 {
        1.5 + 1.5 * pc / 500.0
    } else if pc <= 2000.0 {
        3.0 - (pc - 500.0) / 1500.0
    } else {
        1.5
    }
}

/// +2.5 below 300, −2.0 above 1000, linear in between.
pub fn significance_frontier_regularizer(mean_popularity: f64) -> f64 {
    if mean_popularity < 300.0 {
        2.5
    } else if mean_popularity > 1000.0 {
        -2.0
    } else {
        2.5 - 4.5 * (mean_popularity - 300.0) / 700.0
    }
}

/// Half-life decay `2^(−age / half_life)`.
pub fn decay_weight(age: f64, half_life: f64) -> f64 {
    libm::exp2(-age / half_life)
}

/// Specificity contribution for `n` resolved methods: +1 at 2–3, falling
/// linearly to −1 at 6 and beyond; a single method is neutral.
pub fn specificity(n: usize) -> f64 {
    match n {
        0 | 1 => 0.0,
        2 | 3 => 1.0,
        n if n >= 6 => -1.0,
        n => 1.0 - 2.0 * (n - 3) as f64 / 3.0,
    }
}

fn pairs(methods: &[NodeId]) -> impl Iterator<Item = (&NodeId, &NodeId)> {
    methods.iter().enumerate().flat_map(move |(i, a)| methods[i + 1..].iter().map(move |b| (a, b)))
}

fn is_frontier_leaf(graph: &Graph, m: &NodeId, config: &EvaluatorConfig) -> bool {
    let recent = graph.year_of(m).is_some_and(|y| y >= config.now_year - config.recency_window);
    recent && graph.strong_causal_successors(m, Direction::Forward).is_ok_and(|s| s.is_empty())
}

pub fn novelty_score(
    methods: &[NodeId],
    context: &Context,
    duplicate: &DuplicateVerdict,
    profile: &IdeaProfile,
    corpus: &Corpus<'_>,
    config: &EvaluatorConfig,
) -> Vec<Signal> {
    let graph = corpus.graph;
    let all_pairs: Vec<_> = pairs(methods).collect();
    let disconnection = if all_pairs.is_empty() {
        0.0
    } else {
        let apart = all_pairs.iter().filter(|(a, b)| !corpus.co_utilized(a, b)).count();
        config.disconnection_max * apart as f64 / all_pairs.len() as f64
    };

    let innovation =
        if profile.innovation.trim().is_empty() { profile.full_text() } else { profile.innovation.clone() };
    let idea_words: BTreeSet<String> = content_words(&innovation).into_iter().collect();
    let mechanisms: Vec<BTreeSet<String>> = context
        .edges
        .iter()
        .filter_map(|e| e.evidence.as_ref())
        .map(|ev| content_words(&ev.mechanism_description).into_iter().collect())
        .collect();
    let mechanism = if mechanisms.is_empty() {
        0.0
    } else {
        let closest = mechanisms.iter().map(|m| jaccard(&idea_words, m)).fold(0.0, f64::max);
        config.mechanism_max * (1.0 - closest)
    };

    let leaf =
        if methods.iter().any(|m| is_frontier_leaf(graph, m, config)) { config.frontier_leaf_bonus } else { 0.0 };
    alloc::vec![
        Signal::new("disconnection", disconnection),
        Signal::new("mechanism_distance", mechanism),
        Signal::new("frontier_leaf", leaf),
        Signal::new("duplicate_penalty", duplicate.penalty),
    ]
}

pub fn feasibility_score(methods: &[NodeId], corpus: &Corpus<'_>, config: &EvaluatorConfig) -> Vec<Signal> {
    let graph = corpus.graph;
    let maturity = if methods.is_empty() {
        0.0
    } else {
        let mean = methods.iter().map(|m| feasibility_maturity_curve(corpus.paper_count(m))).sum::<f64>()
            / methods.len() as f64;
        mean.min(config.maturity_cap)
    };
    let resourced = !methods.is_empty()
        && methods.iter().all(|m| {
            graph
                .method(m)
                .and_then(|n| n.introduced_by.as_ref())
                .and_then(|p| graph.paper(p))
                .is_some_and(|p| !p.sections.is_empty())
        });
    let excess = methods.len().saturating_sub(config.complexity_free);
    alloc::vec![
        Signal::new("maturity", maturity),
        Signal::new("resource_availability", if resourced { config.resource_bonus } else { 0.0 }),
        Signal::new("complexity", -config.complexity_penalty * excess as f64),
    ]
}

pub fn significance_score(
    methods: &[NodeId],
    context: &Context,
    corpus: &Corpus<'_>,
    config: &EvaluatorConfig,
) -> Vec<Signal> {
    let graph = corpus.graph;
    let papers: BTreeSet<&NodeId> = context.paper_ids().collect();
    let decayed: f64 = graph
        .edges()
        .iter()
        .filter(|e| e.edge_type != EdgeType::Background)
        .filter(|e| graph.paper_of(&e.target).is_some_and(|p| papers.contains(p)))
        .filter_map(|e| graph.year_of(&e.source))
        .map(|y| decay_weight(f64::max(0.0, (config.now_year - y) as f64), config.indegree_half_life))
        .sum();
    let indegree = config.indegree_max * decayed / (decayed + config.indegree_scale);

    let since = config.now_year - config.recency_window;
    let frontier = methods.iter().any(|m| {
        let own_paper = graph.paper_of(m);
        let recent = graph
            .edges()
            .iter()
            .filter(|e| e.edge_type != EdgeType::Background)
            .filter(|e| e.target == *m || own_paper.is_some_and(|p| e.target == *p))
            .filter(|e| graph.year_of(&e.source).is_some_and(|y| y >= since))
            .count();
        recent >= config.frontier_min_edges
    });

    let top: Vec<&NodeId> = methods.iter().take(config.popularity_top).collect();
    let popularity = if top.is_empty() {
        0.0
    } else {
        top.iter().map(|m| corpus.paper_count(m) as f64).sum::<f64>() / top.len() as f64
    };
    alloc::vec![
        Signal::new("decayed_in_degree", indegree),
        Signal::new("frontier_presence", if frontier { config.frontier_presence } else { 0.0 }),
        Signal::new("frontier_regularizer", significance_frontier_regularizer(popularity)),
    ]
}

fn contains_phrase(haystack: &[String], phrase: &[String]) -> bool {
    !phrase.is_empty() && haystack.windows(phrase.len()).any(|w| w == phrase)
}

pub fn validity_score(
    methods: &[NodeId],
    context: &Context,
    profile: &IdeaProfile,
    dag: &MethodDag,
    config: &EvaluatorConfig,
) -> Vec<Signal> {
    let problem_words = words(&profile.problem);
    let problem_bigrams = content_bigrams(&profile.problem);
    let mut grounding: f64 = 0.0;
    for b in &context.bottlenecks {
        let tag = contains_phrase(&problem_words, &words(b.dimension.as_str()));
        let bigram = !problem_bigrams.is_disjoint(&content_bigrams(&b.description));
        let g = match (tag, bigram) {
            (true, true) => config.grounding_max,
            (true, false) | (false, true) => config.grounding_partial,
            _ => 0.0,
        };
        grounding = grounding.max(g);
    }

    let ancestry = methods.len() >= 2
        && pairs(methods).all(|(a, b)| dag.undirected_distance(a, b, config.ancestry_depth).is_some());

    let density = if context.edges.is_empty() {
        0.0
    } else {
        let w: f64 = context
            .edges
            .iter()
            .map(|e| match e.edge_type {
                t if t.is_strong() => 1.0,
                EdgeType::UsesComponent => 0.5,
                EdgeType::Compares => 0.25,
                _ => 0.0,
            })
            .sum();
        config.density_max * w / context.edges.len() as f64
    };
    alloc::vec![
        Signal::new("bottleneck_grounding", grounding),
        Signal::new("ancestry_consistency", if ancestry { config.ancestry_bonus } else { 0.0 }),
        Signal::new("edge_density", density),
    ]
}

/// Distinct tokens that look like method names (two or more capitals, or
/// letters mixed with digits) and lie outside every resolved mention.
pub fn method_like_tokens(text: &str, registry: &AliasRegistry) -> BTreeSet<String> {
    let spans: Vec<(usize, usize)> = registry.resolve_mentions(text).iter().map(|m| m.span).collect();
    let mut out = BTreeSet::new();
    let mut start = 0;
    for piece in text.split_inclusive(char::is_whitespace) {
        let begin = start;
        start += piece.len();
        let tok = piece.trim().trim_matches(|c: char| !c.is_alphanumeric());
        if tok.len() < 2 {
            continue;
        }
        let upper = tok.chars().filter(|c| c.is_uppercase()).count();
        let digits = tok.chars().any(|c| c.is_ascii_digit());
        let letters = tok.chars().any(|c| c.is_alphabetic());
        if !(upper >= 2 || (digits && letters)) {
            continue;
        }
        let end = begin + piece.trim_end().len();
        if spans.iter().any(|&(s, e)| s < end && begin < e) {
            continue;
        }
        out.insert(String::from(tok));
    }
    out
}

pub fn clarity_score(
    profile: &IdeaProfile,
    methods: &[NodeId],
    registry: &AliasRegistry,
    config: &EvaluatorConfig,
) -> Vec<Signal> {
    let text = profile.full_text();
    let unresolved = method_like_tokens(&text, registry).len();
    let candidates = unresolved + methods.len();
    let recognition =
        if candidates == 0 { 0.0 } else { config.recognition_max * methods.len() as f64 / candidates as f64 };
    let fields = [&profile.problem, &profile.innovation, &profile.target];
    let complete = fields.iter().filter(|f| !f.trim().is_empty()).count();
    let (lo, hi) = config.length_range;
    let n = word_count(&text);
    alloc::vec![
        Signal::new("recognition_rate", recognition),
        Signal::new("specificity", specificity(methods.len())),
        Signal::new("completeness", config.completeness_per_field * complete as f64),
        Signal::new("length_adequacy", if (lo..=hi).contains(&n) { config.length_bonus } else { 0.0 }),
    ]
}

/// The four triggered-row adjustments on post-flag scores.
pub fn omega_terms(s: &DimensionScores) -> Vec<Signal> {
    let mut out = Vec::new();
    if s.novelty >= 7.0 && s.feasibility < 4.0 {
        out.push(Signal::new("novel_but_infeasible", -0.6));
    }
    if s.validity >= 7.0 && s.feasibility >= 7.0 {
        out.push(Signal::new("valid_and_feasible", 0.2));
    }
    if s.significance >= 6.0 {
        out.push(Signal::new("significant", 0.4));
    } else if s.significance >= 5.0 {
        out.push(Signal::new("moderately_significant", 0.2));
    }
    let a = s.as_array();
    let max = a.iter().copied().fold(f64::MIN, f64::max);
    let min = a.iter().copied().fold(f64::MAX, f64::min);
    if max - min <= 2.0 && min >= 5.0 {
        out.push(Signal::new("balanced", 0.3));
    }
    out
}

pub fn cross_regularizer(post_flag: &DimensionScores) -> f64 {
    omega_terms(post_flag).iter().map(|t| t.value).sum()
}
