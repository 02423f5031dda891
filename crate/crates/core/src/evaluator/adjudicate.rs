//! One-sided adjudication: a verdict can restore part of the automatic
//! duplicate penalty and cap dimensions, but the final overall never rises
//! above the penalty-restored overall.

use serde::{Deserialize, Serialize};

use super::{finish, score_from, Dimension, EvaluationReport, EvaluatorConfig, IdeaProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicateRelation {
    Duplicate,
    Related,
    Unrelated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjudicatorVerdict {
    pub duplicate_relation: DuplicateRelation,
    pub coherence: f64,
    pub novelty_validity: f64,
    pub plausibility: f64,
}

impl AdjudicatorVerdict {
    pub fn min_sub_score(&self) -> f64 {
        self.coherence.min(self.novelty_validity).min(self.plausibility)
    }
}

/// Port for an external adjudicator.
pub trait Adjudicator {
    fn adjudicate(&self, profile: &IdeaProfile, report: &EvaluationReport) -> AdjudicatorVerdict;
}

/// Returns a fixed verdict.
#[derive(Clone, Copy, Debug)]
pub struct ScriptedAdjudicator(pub AdjudicatorVerdict);

impl Adjudicator for ScriptedAdjudicator {
    fn adjudicate(&self, _: &IdeaProfile, _: &EvaluationReport) -> AdjudicatorVerdict {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdjudicationConfig {
    /// Share of the duplicate penalty given back for duplicate, related and
    /// unrelated verdicts.
    pub restoration: (f64, f64, f64),
    pub cap_margin: f64,
    pub low_sub_score: f64,
    pub hard_cap: f64,
}

impl Default for AdjudicationConfig {
    fn default() -> Self {
        Self { restoration: (0.0, 0.6, 0.9), cap_margin: 1.0, low_sub_score: 3.0, hard_cap: 6.0 }
    }
}

impl AdjudicationConfig {
    pub fn rate(&self, r: DuplicateRelation) -> f64 {
        match r {
            DuplicateRelation::Duplicate => self.restoration.0,
            DuplicateRelation::Related => self.restoration.1,
            DuplicateRelation::Unrelated => self.restoration.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjudicationTrace {
    pub verdict: AdjudicatorVerdict,
    pub restoration_rate: f64,
    /// Overall after Part A alone.
    pub restored_overall: f64,
    /// Overall recomputed from capped post-flag scores.
    pub capped_overall: f64,
    pub hard_cap_applied: bool,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AdjudicationError {
    #[error("fallback reports carry no scores to adjudicate")]
    Fallback,
    #[error("verdict sub-score {0} outside [1, 10]")]
    OutOfRange(f64),
}

pub fn apply_adjudication(
    report: &EvaluationReport,
    verdict: &AdjudicatorVerdict,
    config: &EvaluatorConfig,
) -> Result<EvaluationReport, AdjudicationError> {
    let (Some(scores), false) = (&report.scores, report.fallback_used) else {
        return Err(AdjudicationError::Fallback);
    };
    for v in [verdict.coherence, verdict.novelty_validity, verdict.plausibility] {
        if !(1.0..=10.0).contains(&v) {
            return Err(AdjudicationError::OutOfRange(v));
        }
    }
    let adj = &config.adjudication;

    // Part A: give back a share of the duplicate penalty.
    let rate = adj.rate(verdict.duplicate_relation);
    let mut restored = scores.clone();
    let novelty = restored.signal_breakdown.entry(Dimension::Novelty).or_default();
    for s in novelty.iter_mut().filter(|s| s.name == "duplicate_penalty") {
        s.value = (1.0 - rate) * report.duplicate.penalty;
    }
    let n = score_from(config.base, novelty);
    restored.novelty = n;
    let (post_a, _, _, overall_a) = finish(&restored, config);

    // Part B: cap dimensions at verdict + margin.
    let mut capped = post_a.clone();
    let caps = [
        (Dimension::Validity, verdict.coherence),
        (Dimension::Clarity, verdict.coherence),
        (Dimension::Novelty, verdict.novelty_validity),
        (Dimension::Feasibility, verdict.plausibility),
        (Dimension::Significance, verdict.plausibility),
    ];
    for (d, v) in caps {
        capped.set(d, capped.get(d).min(v + adj.cap_margin));
    }
    let terms = super::omega_terms(&capped);
    let omega = terms.iter().map(|t| t.value).sum();
    let capped_overall = super::aggregate_overall(&capped, omega, &config.weights);
    let hard = verdict.min_sub_score() < adj.low_sub_score;
    let mut overall = overall_a.min(capped_overall);
    if hard {
        overall = overall.min(adj.hard_cap);
    }

    Ok(EvaluationReport {
        scores: Some(restored),
        post_flag_scores: Some(capped),
        omega,
        omega_terms: terms,
        overall,
        adjudicated: true,
        adjudication: Some(AdjudicationTrace {
            verdict: *verdict,
            restoration_rate: rate,
            restored_overall: overall_a,
            capped_overall,
            hard_cap_applied: hard,
        }),
        ..report.clone()
    })
}
