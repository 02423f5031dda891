//! Deterministic, graph-grounded idea scoring.
//!
//! Each dimension starts from a base score and adds named signal
//! contributions, clipped to [1, 10]. An optional red-flag pass turns the raw
//! scores into post-flag scores, the cross-dimensional regularizer adds a
//! small correction, and the weighted sum is clipped into the overall score.
//! Ideas naming no known method get a fixed prior instead.

mod adjudicate;
mod signals;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{MethodDag, NodeId};
use crate::retrieval::{
    duplicate_risk, retrieve_context, Corpus, DuplicateConfig, DuplicateVerdict, EmbeddingProvider, RerankProvider,
    RetrievalConfig,
};

pub use adjudicate::{
    apply_adjudication, AdjudicationConfig, AdjudicationError, AdjudicationTrace, Adjudicator, AdjudicatorVerdict,
    DuplicateRelation, ScriptedAdjudicator,
};
pub use signals::{
    clarity_score, cross_regularizer, decay_weight, feasibility_maturity_curve, feasibility_score, method_like_tokens,
    novelty_score, omega_terms, significance_frontier_regularizer, significance_score, specificity, validity_score,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Novelty,
    Feasibility,
    Significance,
    Validity,
    Clarity,
}

impl Dimension {
    pub const ALL: [Dimension; 5] =
        [Self::Novelty, Self::Feasibility, Self::Significance, Self::Validity, Self::Clarity];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Novelty => "novelty",
            Self::Feasibility => "feasibility",
            Self::Significance => "significance",
            Self::Validity => "validity",
            Self::Clarity => "clarity",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four extracted idea fields.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdeaProfile {
    pub problem: String,
    pub innovation: String,
    pub implementation: String,
    pub target: String,
}

impl IdeaProfile {
    /// Non-empty fields joined by newlines.
    pub fn full_text(&self) -> String {
        let parts = [&self.problem, &self.innovation, &self.implementation, &self.target];
        let kept: Vec<&str> = parts.iter().map(|s| s.as_str()).filter(|s| !s.trim().is_empty()).collect();
        kept.join("\n")
    }

    pub fn is_empty(&self) -> bool {
        self.full_text().is_empty()
    }
}

/// One named additive contribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    pub name: String,
    pub value: f64,
}

impl Signal {
    pub fn new(name: &str, value: f64) -> Self {
        Self { name: name.into(), value }
    }
}

pub fn clip(x: f64) -> f64 {
    x.clamp(1.0, 10.0)
}

/// `clip(base + Σ signals)`.
pub fn score_from(base: f64, signals: &[Signal]) -> f64 {
    clip(base + signals.iter().map(|s| s.value).sum::<f64>())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DimensionScores {
    pub novelty: f64,
    pub feasibility: f64,
    pub significance: f64,
    pub validity: f64,
    pub clarity: f64,
    pub signal_breakdown: BTreeMap<Dimension, Vec<Signal>>,
}

impl DimensionScores {
    pub fn get(&self, d: Dimension) -> f64 {
        match d {
            Dimension::Novelty => self.novelty,
            Dimension::Feasibility => self.feasibility,
            Dimension::Significance => self.significance,
            Dimension::Validity => self.validity,
            Dimension::Clarity => self.clarity,
        }
    }

    pub fn set(&mut self, d: Dimension, v: f64) {
        match d {
            Dimension::Novelty => self.novelty = v,
            Dimension::Feasibility => self.feasibility = v,
            Dimension::Significance => self.significance = v,
            Dimension::Validity => self.validity = v,
            Dimension::Clarity => self.clarity = v,
        }
    }

    /// Scores in [`Dimension::ALL`] order.
    pub fn as_array(&self) -> [f64; 5] {
        Dimension::ALL.map(|d| self.get(d))
    }

    /// Scores without breakdowns, e.g. for hand-built test inputs.
    pub fn from_array(values: [f64; 5]) -> Self {
        let mut s = Self::default();
        for (d, v) in Dimension::ALL.into_iter().zip(values) {
            s.set(d, v);
        }
        s
    }
}

/// Caps `cap_dimension` at `cap` whenever `dimension` scores below `below`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RedFlagRule {
    pub dimension: Dimension,
    pub below: f64,
    pub cap_dimension: Dimension,
    pub cap: f64,
}

/// Post-flag scores; identity when `rules` is empty.
pub fn apply_red_flags(scores: &DimensionScores, rules: &[RedFlagRule]) -> DimensionScores {
    let mut out = scores.clone();
    for r in rules {
        if scores.get(r.dimension) < r.below {
            let v = out.get(r.cap_dimension).min(r.cap);
            out.set(r.cap_dimension, clip(v));
        }
    }
    out
}

/// Every constant the scorers use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluatorConfig {
    pub now_year: i32,
    pub recency_window: i32,
    pub base: f64,
    /// Novelty, feasibility, significance, validity, clarity.
    pub weights: [f64; 5],
    pub fallback_overall: f64,
    pub disconnection_max: f64,
    pub mechanism_max: f64,
    pub frontier_leaf_bonus: f64,
    pub maturity_cap: f64,
    pub resource_bonus: f64,
    pub complexity_free: usize,
    pub complexity_penalty: f64,
    pub indegree_max: f64,
    pub indegree_half_life: f64,
    pub indegree_scale: f64,
    pub frontier_presence: f64,
    pub frontier_min_edges: usize,
    pub popularity_top: usize,
    pub grounding_max: f64,
    pub grounding_partial: f64,
    pub ancestry_bonus: f64,
    pub ancestry_depth: usize,
    pub density_max: f64,
    pub recognition_max: f64,
    pub completeness_per_field: f64,
    pub length_bonus: f64,
    pub length_range: (usize, usize),
    pub red_flags: Vec<RedFlagRule>,
    pub retrieval: RetrievalConfig,
    pub duplicate: DuplicateConfig,
    pub adjudication: AdjudicationConfig,
}

impl Default for EvaluatorConfig {
    fn default() -> Self {
        Self {
            now_year: 2025,
            recency_window: 4,
            base: 5.0,
            weights: [0.20, 0.20, 0.25, 0.20, 0.15],
            fallback_overall: 6.5,
            disconnection_max: 2.0,
            mechanism_max: 1.5,
            frontier_leaf_bonus: 0.8,
            maturity_cap: 3.5,
            resource_bonus: 0.5,
            complexity_free: 3,
            complexity_penalty: 0.5,
            indegree_max: 2.0,
            indegree_half_life: 5.0,
            indegree_scale: 10.0,
            frontier_presence: 1.0,
            frontier_min_edges: 3,
            popularity_top: 5,
            grounding_max: 3.5,
            grounding_partial: 1.75,
            ancestry_bonus: 1.0,
            ancestry_depth: 4,
            density_max: 1.0,
            recognition_max: 1.0,
            completeness_per_field: 0.5,
            length_bonus: 0.5,
            length_range: (20, 200),
            red_flags: Vec::new(),
            retrieval: RetrievalConfig::default(),
            duplicate: DuplicateConfig::default(),
            adjudication: AdjudicationConfig::default(),
        }
    }
}

/// `clip(w·s′ + omega)`.
pub fn aggregate_overall(post_flag: &DimensionScores, omega: f64, weights: &[f64; 5]) -> f64 {
    let dot: f64 = post_flag.as_array().iter().zip(weights).map(|(s, w)| s * w).sum();
    clip(dot + omega)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub methods: Vec<NodeId>,
    pub scores: Option<DimensionScores>,
    pub post_flag_scores: Option<DimensionScores>,
    pub omega: f64,
    pub omega_terms: Vec<Signal>,
    pub overall: f64,
    pub duplicate: DuplicateVerdict,
    pub fallback_used: bool,
    pub adjudicated: bool,
    pub adjudication: Option<AdjudicationTrace>,
}

/// Shared inputs of an evaluation.
pub struct EvalEnv<'a> {
    pub corpus: &'a Corpus<'a>,
    pub dag: &'a MethodDag,
    pub embedder: &'a dyn EmbeddingProvider,
    pub reranker: &'a dyn RerankProvider,
}

/// Raw dimension scores for an idea whose methods resolved.
pub fn score_dimensions(
    profile: &IdeaProfile,
    methods: &[NodeId],
    context: &crate::retrieval::Context,
    duplicate: &DuplicateVerdict,
    env: &EvalEnv<'_>,
    config: &EvaluatorConfig,
) -> DimensionScores {
    let mut breakdown = BTreeMap::new();
    breakdown.insert(Dimension::Novelty, novelty_score(methods, context, duplicate, profile, env.corpus, config));
    breakdown.insert(Dimension::Feasibility, feasibility_score(methods, env.corpus, config));
    breakdown.insert(Dimension::Significance, significance_score(methods, context, env.corpus, config));
    breakdown.insert(Dimension::Validity, validity_score(methods, context, profile, env.dag, config));
    breakdown.insert(Dimension::Clarity, clarity_score(profile, methods, env.corpus.registry, config));
    let mut scores = DimensionScores::default();
    for d in Dimension::ALL {
        scores.set(d, score_from(config.base, &breakdown[&d]));
    }
    scores.signal_breakdown = breakdown;
    scores
}

/// Post-flag scores, regularizer and overall for raw scores.
pub(crate) fn finish(scores: &DimensionScores, config: &EvaluatorConfig) -> (DimensionScores, Vec<Signal>, f64, f64) {
    let post = apply_red_flags(scores, &config.red_flags);
    let terms = omega_terms(&post);
    let omega = terms.iter().map(|t| t.value).sum();
    let overall = aggregate_overall(&post, omega, &config.weights);
    (post, terms, omega, overall)
}

/// Full evaluation: resolve methods, retrieve context, score, aggregate.
pub fn evaluate_idea(profile: &IdeaProfile, env: &EvalEnv<'_>, config: &EvaluatorConfig) -> EvaluationReport {
    let text = profile.full_text();
    let context = retrieve_context(&text, env.corpus, &config.retrieval);
    let duplicate = duplicate_risk(&text, env.corpus, env.embedder, env.reranker, &config.duplicate);
    let methods = context.methods.clone();
    if methods.is_empty() {
        return EvaluationReport {
            methods,
            scores: None,
            post_flag_scores: None,
            omega: 0.0,
            omega_terms: Vec::new(),
            overall: config.fallback_overall,
            duplicate,
            fallback_used: true,
            adjudicated: false,
            adjudication: None,
        };
    }
    let scores = score_dimensions(profile, &methods, &context, &duplicate, env, config);
    let (post, omega_terms, omega, overall) = finish(&scores, config);
    EvaluationReport {
        methods,
        scores: Some(scores),
        post_flag_scores: Some(post),
        omega,
        omega_terms,
        overall,
        duplicate,
        fallback_used: false,
        adjudicated: false,
        adjudication: None,
    }
}
