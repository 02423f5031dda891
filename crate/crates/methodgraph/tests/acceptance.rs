//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the summary lines are always
//! printed; the process exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::{fixture, fx, graph, run};
use methodgraph::config::Config;
use methodgraph::io::{load_graph, load_registry, read_jsonl, EdgeRecord, LoadedGraph};
use methodgraph_core::bench::{chain_metrics, synthesize_graph, SynthGraphParams};
use methodgraph_core::evaluator::{
    apply_adjudication, cross_regularizer, evaluate_idea, feasibility_maturity_curve, AdjudicatorVerdict, Dimension,
    DimensionScores, DuplicateRelation, EvalEnv, EvaluationReport, EvaluatorConfig, IdeaProfile,
};
use methodgraph_core::generator::{
    build_gap_summary, generate_proposal, select_strategy, verify_certificate, Certificate, GapSummary,
    GeneratorConfig, Proposer, ProposerError, ScriptedProposer, Strategy,
};
use methodgraph_core::graph::{validate_edge, MethodDag, MethodNode};
use methodgraph_core::lineage::{
    lineage_from_seeds, mcts_direction_search, rank_chain, splice, temporal_coherence, Algorithm, EvolutionChain,
    Provenance, ScoredPath, SearchParams, SearchTree,
};
use methodgraph_core::retrieval::{
    retrieve_context, step_penalty, Corpus, HashEmbedder, LexicalReranker, RetrievalConfig,
};
use methodgraph_core::rng::rng_for;
use methodgraph_core::{AliasRegistry, Direction, Edge, Graph, GraphBuilder, Node, NodeId};
use rand::Rng;
use serde::Deserialize;

type Outcome = Result<String, String>;

/// Name, check and runtime limit.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// The four cross-dimensional adjustment rows, written out independently.
fn omega_oracle(s: [f64; 5]) -> f64 {
    let [n, f, sig, v, _] = s;
    let mut w = 0.0;
    if n >= 7.0 && f < 4.0 {
        w += -0.6;
    }
    if v >= 7.0 && f >= 7.0 {
        w += 0.2;
    }
    if sig >= 6.0 {
        w += 0.4;
    } else if (5.0..6.0).contains(&sig) {
        w += 0.2;
    }
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if max - min <= 2.0 && min >= 5.0 {
        w += 0.3;
    }
    w
}

const WEIGHTS: [f64; 5] = [0.20, 0.20, 0.25, 0.20, 0.15];

fn overall_oracle(s: [f64; 5]) -> f64 {
    let dot: f64 = s.iter().zip(WEIGHTS).map(|(x, w)| x * w).sum();
    (dot + omega_oracle(s)).clamp(1.0, 10.0)
}

fn criterion_1() -> Outcome {
    const TOL: f64 = 1e-9;
    let tc = [
        (Some(-1), 0.40),
        (Some(0), 0.85),
        (Some(1), 1.00),
        (Some(3), 1.00),
        (Some(4), 0.80),
        (Some(6), 0.80),
        (Some(7), 0.92),
        (Some(10), 0.68),
        (Some(15), 0.30),
        (Some(40), 0.30),
        (None, 0.70),
    ];
    for (gap, want) in tc {
        let got = temporal_coherence(gap).map_err(|e| e.to_string())?;
        ensure(close(got, want, TOL), || format!("temporal_coherence({gap:?}) = {got}, want {want}"))?;
    }
    ensure(temporal_coherence(Some(-2)).is_err(), || "gap -2 must be filtered".into())?;

    for (pc, want) in [(0, 1.5), (250, 2.25), (500, 3.0), (2000, 2.0), (5000, 1.5)] {
        let got = feasibility_maturity_curve(pc);
        ensure(close(got, want, TOL), || format!("maturity({pc}) = {got}, want {want}"))?;
    }

    let steps = [
        (0.0, 0.0),
        (0.5499, 0.0),
        (0.55, -0.5),
        (0.6499, -0.5),
        (0.65, -1.5),
        (0.75, -2.5),
        (0.85, -4.0),
        (1.0, -4.0),
    ];
    for (s, want) in steps {
        let got = step_penalty(s).map_err(|e| e.to_string())?;
        ensure(close(got, want, TOL), || format!("step_penalty({s}) = {got}, want {want}"))?;
    }

    // One row at a time, then the combinations quoted alongside the table.
    let rows: [([f64; 5], f64); 10] = [
        ([7.0, 3.0, 4.0, 4.0, 4.0], -0.6),
        ([4.0, 7.0, 4.0, 7.0, 4.0], 0.2),
        ([4.0, 4.0, 6.0, 4.0, 4.0], 0.4),
        ([4.0, 4.0, 5.5, 4.0, 4.0], 0.2),
        ([5.0, 6.0, 4.9, 7.0, 6.0], 0.0),
        ([8.0, 3.0, 5.0, 5.0, 5.0], -0.4),
        ([7.0, 7.0, 7.0, 7.0, 7.0], 0.9),
        ([5.0, 5.0, 5.0, 5.0, 5.0], 0.5),
        ([9.0, 9.0, 9.0, 9.0, 7.0], 0.2 + 0.4 + 0.3),
        ([9.0, 9.0, 9.0, 9.0, 6.9], 0.2 + 0.4),
    ];
    for (s, want) in rows {
        let got = cross_regularizer(&DimensionScores::from_array(s));
        ensure(close(got, want, TOL), || format!("cross_regularizer({s:?}) = {got}, want {want}"))?;
        ensure(close(got, omega_oracle(s), TOL), || format!("cross_regularizer({s:?}) disagrees with oracle"))?;
    }
    Ok(format!("{} temporal, 5 maturity, {} step and {} table rows exact", tc.len() + 1, steps.len(), rows.len()))
}

struct Eval10 {
    loaded: LoadedGraph,
    registry: AliasRegistry,
    dag: MethodDag,
}

impl Eval10 {
    fn load() -> Self {
        let loaded =
            load_graph(&fixture("eval10/nodes.jsonl"), &fixture("eval10/edges.jsonl"), None).expect("eval10 loads");
        let registry =
            load_registry(&loaded.graph, None, &Config::default().aliases.version_suffixes).expect("registry");
        let dag = MethodDag::lenient(&loaded.graph, &loaded.seeds).expect("dag");
        Self { loaded, registry, dag }
    }

    fn reports(&self, ideas: &[IdeaProfile], config: &EvaluatorConfig) -> Vec<EvaluationReport> {
        let corpus = Corpus::build(&self.loaded.graph, &self.registry);
        let embedder = HashEmbedder::default();
        let reranker = LexicalReranker::default();
        let env = EvalEnv { corpus: &corpus, dag: &self.dag, embedder: &embedder, reranker: &reranker };
        ideas.iter().map(|i| evaluate_idea(i, &env, config)).collect()
    }
}

fn eval10_ideas() -> Vec<IdeaProfile> {
    read_jsonl::<IdeaProfile>(&fixture("eval10/ideas.jsonl")).expect("ideas").into_iter().map(|(_, i)| i).collect()
}

fn criterion_2() -> Outcome {
    let fx = Eval10::load();
    ensure(fx.loaded.graph.node_count() == 10, || "fixture graph must have 10 nodes".into())?;
    let ideas = eval10_ideas();
    ensure(ideas.len() == 20, || format!("{} ideas, want 20", ideas.len()))?;
    let config = EvaluatorConfig::default();
    let (mut scored, mut fallback) = (0, 0);
    let mut rows_seen = BTreeSet::new();
    for (i, (idea, r)) in ideas.iter().zip(fx.reports(&ideas, &config)).enumerate() {
        if r.fallback_used {
            ensure(r.overall == 6.5 && r.methods.is_empty(), || format!("idea {i}: fallback overall {}", r.overall))?;
            fallback += 1;
            continue;
        }
        let scores = r.scores.as_ref().ok_or_else(|| format!("idea {i}: no scores"))?;
        let mut s = [0.0; 5];
        for (k, d) in Dimension::ALL.into_iter().enumerate() {
            let sum: f64 = scores.signal_breakdown.get(&d).map_or(0.0, |v| v.iter().map(|x| x.value).sum());
            s[k] = (5.0 + sum).clamp(1.0, 10.0);
            ensure(close(s[k], scores.get(d), 1e-9), || format!("idea {i}: {d} {} vs hand {}", scores.get(d), s[k]))?;
        }
        let want = overall_oracle(s);
        ensure(close(r.overall, want, 1e-9), || {
            format!("idea {i} ({}): overall {} vs hand {want}", idea.problem, r.overall)
        })?;
        rows_seen.extend(r.omega_terms.iter().map(|t| t.name.clone()));
        scored += 1;
    }
    ensure(fallback > 0 && scored > 0, || "fixture must exercise both paths".into())?;
    Ok(format!("{scored} scored + {fallback} fallback ideas match; omega rows hit: {}", rows_seen.len()))
}

/// Every maximal, temporally admissible path from `seed`, with visits read
/// from the search tree so `rank_chain` sees the same inputs.
fn enumerate_paths(g: &Graph, seed: &NodeId, dir: Direction, max_depth: usize, tree: &SearchTree) -> Vec<ScoredPath> {
    fn go(g: &Graph, p: ScoredPath, dir: Direction, max_depth: usize, out: &mut Vec<ScoredPath>) {
        let mut grew = false;
        if p.edges.len() < max_depth {
            for (e, n) in g.strong_causal_successors(p.nodes.last().unwrap(), dir).unwrap() {
                if p.nodes.contains(n) || g.year_gap(e).is_some_and(|x| x < -1) {
                    continue;
                }
                let mut q = p.clone();
                q.nodes.push(n.clone());
                q.edges.push(e.clone());
                go(g, q, dir, max_depth, out);
                grew = true;
            }
        }
        if !grew {
            out.push(p);
        }
    }
    let mut out = Vec::new();
    let root = ScoredPath { nodes: vec![seed.clone()], edges: vec![], visits: vec![], value: 0.0 };
    go(g, root, dir, max_depth, &mut out);
    for p in &mut out {
        p.visits = tree.path_visits(&p.nodes);
    }
    out
}

fn same_chain(a: &EvolutionChain, b: &EvolutionChain) -> bool {
    a.nodes == b.nodes && a.edges == b.edges
}

fn criterion_3() -> Outcome {
    let p = SearchParams::default();
    let no_mask = BTreeSet::new();
    let (mut mcts_ok, mut beam_ok, mut max_nodes) = (0, 0, 0);
    for s in 0..100u64 {
        let sp = SynthGraphParams {
            n_methods: 30,
            branching: 2,
            depth: 5,
            cross_link_rate: 0.6,
            seed: s,
            ..Default::default()
        };
        let (g, reference) = synthesize_graph(&sp).map_err(|e| e.to_string())?;
        max_nodes = max_nodes.max(g.methods().count());
        let reg = AliasRegistry::from_graph(&g).map_err(|e| e.to_string())?;
        // A mid-chain seed, so both directions branch.
        let mid = &reference.chains[reference.chains.len() / 2];
        let seed = reg.lookup(&mid[sp.depth / 2]).ok_or("seed name unresolved")?.clone();

        let back = mcts_direction_search(&g, &seed, Direction::Backward, &p, &no_mask).map_err(|e| e.to_string())?;
        let fwd = mcts_direction_search(&g, &seed, Direction::Forward, &p, &no_mask).map_err(|e| e.to_string())?;
        let max_visits = back.tree.max_visits().max(fwd.tree.max_visits());
        let mut best: Option<EvolutionChain> = None;
        for b in enumerate_paths(&g, &seed, Direction::Backward, p.max_depth, &back.tree) {
            for f in enumerate_paths(&g, &seed, Direction::Forward, p.max_depth, &fwd.tree) {
                let mut c = splice(&b, &f, &seed, Provenance::Primary);
                c.rank_score = rank_chain(&c, &p, max_visits);
                if best.as_ref().is_none_or(|x| c.rank_score > x.rank_score) {
                    best = Some(c);
                }
            }
        }
        let best = best.ok_or("no enumerated chain")?;
        let top = |algo| {
            lineage_from_seeds(&g, std::slice::from_ref(&seed), algo, &p, 0).map(|r| r.chains.into_iter().next())
        };
        let m = top(Algorithm::SgtMcts).map_err(|e| e.to_string())?;
        let b1 = top(Algorithm::Beam { width: 1 }).map_err(|e| e.to_string())?;
        mcts_ok += m.is_some_and(|c| same_chain(&c, &best)) as usize;
        beam_ok += b1.is_some_and(|c| same_chain(&c, &best)) as usize;
    }
    ensure(max_nodes <= 30, || format!("instance with {max_nodes} methods"))?;
    let detail = format!("SGT-MCTS {mcts_ok}/100, Beam@1 {beam_ok}/100 match the exhaustive optimum");
    ensure(mcts_ok >= 95 && beam_ok < mcts_ok, || detail.clone())?;
    Ok(detail)
}

#[derive(Deserialize)]
struct ValidatorCase {
    name: String,
    edge: EdgeRecord,
    existing: Vec<EdgeRecord>,
    expect: String,
}

fn criterion_4() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let empty = dir.path().join("edges.jsonl");
    fs::write(&empty, "").map_err(|e| e.to_string())?;
    let g = load_graph(&fixture("validator/nodes.jsonl"), &empty, None).map_err(|e| e.to_string())?.graph;
    let cases: Vec<ValidatorCase> =
        read_jsonl(&fixture("validator/cases.jsonl")).map_err(|e| e.to_string())?.into_iter().map(|(_, c)| c).collect();
    let (mut broken, mut broken_ok, mut good, mut good_ok) = (0, 0, 0, 0);
    let mut failures = Vec::new();
    for c in cases {
        let edge = Edge::from(c.edge);
        let existing: Vec<Edge> = c.existing.into_iter().map(Edge::from).collect();
        let text = g.citing_text(&edge.source).unwrap_or_default();
        let verdict = validate_edge(&edge, &text, |id| g.year_of(id), &existing, 1);
        let got = match &verdict {
            methodgraph_core::graph::Verdict::Accept => "accept",
            methodgraph_core::graph::Verdict::Reject(r) => r.tag(),
        };
        let hit = got == c.expect;
        if c.expect == "accept" {
            good += 1;
            good_ok += hit as usize;
        } else {
            broken += 1;
            broken_ok += hit as usize;
        }
        if !hit {
            failures.push(format!("{}: got {got}, want {}", c.name, c.expect));
        }
    }
    let detail = format!(
        "{broken_ok}/{broken} broken edges rejected with the right reason, {good_ok}/{good} well-formed accepted"
    );
    ensure(broken == 50 && failures.is_empty(), || format!("{detail}; {}", failures.join("; ")))?;
    Ok(detail)
}

/// An adversarial stand-in for the proposer.
struct Adversary {
    inner: ScriptedProposer,
}

impl Proposer for Adversary {
    fn propose(&self, prompt: &str) -> Result<String, ProposerError> {
        self.inner.propose(prompt)
    }
}

fn proposal_json(title: &str, c: &Certificate) -> String {
    serde_json::json!({
        "title": title,
        "body": "Adversarial body.",
        "certificate": c,
    })
    .to_string()
}

fn mutate_quote(q: &str, rng: &mut impl Rng) -> String {
    let mut chars: Vec<char> = q.chars().collect();
    match rng.random_range(0..4) {
        0 => {
            chars.pop();
        }
        1 => {
            let i = rng.random_range(0..chars.len());
            chars[i] =
                if chars[i].is_uppercase() { chars[i].to_ascii_lowercase() } else { chars[i].to_ascii_uppercase() };
            if chars.iter().collect::<String>() == q {
                chars.push('.');
            }
        }
        2 => chars.insert(rng.random_range(0..chars.len()), ' '),
        _ => chars.push(' '),
    }
    chars.into_iter().collect()
}

fn adversary(kind: u32, graph: &Graph, summary: &GapSummary, rng: &mut impl Rng) -> Adversary {
    let causal: Vec<&Edge> = graph.edges().iter().filter(|e| e.edge_type.is_causal()).collect();
    let in_summary: Vec<&Edge> = summary.edge_refs().into_iter().filter_map(|k| graph.edge(k)).collect();
    let pick = |rng: &mut dyn rand::RngCore, pool: &[&Edge]| -> Certificate {
        let pool = if pool.is_empty() { &causal } else { pool };
        let e = pool[(rng.next_u32() as usize) % pool.len()];
        Certificate {
            edge_source: e.source.clone(),
            edge_target: e.target.clone(),
            edge_type: e.edge_type,
            bottleneck_quote: e.evidence.as_ref().unwrap().bottleneck_quote.clone(),
            justification: "because".into(),
        }
    };
    let responses: Vec<Result<String, ProposerError>> = match kind {
        0 => vec![Err(ProposerError::Unavailable("offline".into()))],
        1 => {
            let len = rng.random_range(0..64);
            vec![Ok((0..len).map(|_| rng.random_range(' '..='~')).collect())]
        }
        2 => vec![Ok(proposal_json("Faithful", &pick(rng, &in_summary)))],
        3 => vec![Ok(proposal_json("Any edge", &pick(rng, &causal)))],
        4 => {
            let mut c = pick(rng, &in_summary);
            c.bottleneck_quote = mutate_quote(&c.bottleneck_quote, rng);
            vec![Ok(proposal_json("Paraphrase", &c))]
        }
        5 => {
            let mut c = pick(rng, &in_summary);
            std::mem::swap(&mut c.edge_source, &mut c.edge_target);
            vec![Ok(proposal_json("Reversed", &c))]
        }
        6 => {
            let mut c = pick(rng, &in_summary);
            c.edge_type = methodgraph_core::EdgeType::ALL[rng.random_range(0..methodgraph_core::EdgeType::ALL.len())];
            vec![Ok(proposal_json("Retyped", &c))]
        }
        7 => vec![Ok(proposal_json(if rng.random_bool(0.5) { "" } else { "   " }, &pick(rng, &in_summary)))],
        8 => vec![Ok(format!(
            "Sure! Here it is:\n{}\nHope that helps.",
            proposal_json("Wrapped", &pick(rng, &in_summary))
        ))],
        9 => vec![Ok("{\"title\": \"x\"".into()), Ok(proposal_json("Second try", &pick(rng, &in_summary)))],
        10 => vec![Ok(r#"{"title": "No certificate", "body": "b"}"#.into())],
        _ => {
            let mut c = pick(rng, &in_summary);
            c.edge_source = NodeId::from("ghost");
            vec![Ok(proposal_json("Invented node", &c))]
        }
    };
    Adversary { inner: ScriptedProposer::new(responses) }
}

fn tiny() -> LoadedGraph {
    load_graph(&fixture("tiny/nodes.jsonl"), &fixture("tiny/edges.jsonl"), Some(&fixture("tiny/method_seeds.jsonl")))
        .expect("tiny loads")
}

fn criterion_5() -> Outcome {
    let loaded = tiny();
    let g = &loaded.graph;
    let registry = load_registry(g, Some(&fixture("tiny/aliases.json")), &Config::default().aliases.version_suffixes)
        .map_err(|e| e.to_string())?;
    let corpus = Corpus::build(g, &registry);
    let dag = MethodDag::lenient(g, &loaded.seeds).map_err(|e| e.to_string())?;
    let gen = GeneratorConfig::default();
    let queries = [
        "attention cost grows quadratically with sequence length",
        "QLoRA memory",
        "Mamba selective state spaces",
        "low-rank adaptation of a Transformer",
        "protein folding",
    ];
    let summaries: Vec<(GapSummary, Strategy)> = queries
        .iter()
        .map(|q| {
            let context = retrieve_context(q, &corpus, &RetrievalConfig::default());
            let seeds: Vec<NodeId> = registry.methods_in(q);
            let chains = if seeds.is_empty() {
                Vec::new()
            } else {
                lineage_from_seeds(g, &seeds, Algorithm::SgtMcts, &SearchParams::default(), 0)
                    .map(|r| r.chains)
                    .unwrap_or_default()
            };
            let summary = build_gap_summary(&context, &chains, &corpus, &dag, &gen);
            let strategy = select_strategy(&summary, &gen);
            (summary, strategy)
        })
        .collect();
    ensure(summaries.iter().filter(|(s, _)| !s.is_empty()).count() >= 3, || "too few non-empty summaries".into())?;

    let mut rng = rng_for(2024, 0);
    let (mut proposals, mut certified, mut degenerate, mut accepted) = (0, 0, 0, 0);
    for i in 0..1000 {
        let (summary, strategy) = &summaries[i % summaries.len()];
        let kind = rng.random_range(0..12);
        let adv = adversary(kind, g, summary, &mut rng);
        let out = generate_proposal(summary, *strategy, &adv, g, &gen);
        proposals += 1;
        let p = &out.proposal;
        match (&p.certificate, p.degenerate) {
            (Some(c), false) if verify_certificate(c, g) => {
                certified += 1;
                ensure(summary.edge_refs().contains(&c.edge()), || format!("case {i}: certificate outside summary"))?;
            }
            (None, true) => degenerate += 1,
            _ => return Err(format!("case {i} (adversary {kind}): invariant violated: {p:?}")),
        }
        ensure(p.fallback == out.fallback_reason.is_some(), || format!("case {i}: fallback flag mismatch"))?;
        accepted += (!p.fallback) as usize;
    }
    ensure(proposals == 1000, || format!("{proposals} proposals"))?;
    Ok(format!(
        "{proposals} proposals: {certified} certified ({accepted} from the proposer), {degenerate} degenerate, 0 violations"
    ))
}

/// Every file under `dir`, keyed by relative path.
fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn criterion_6() -> Outcome {
    let inputs = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut idea_files = Vec::new();
    for (i, idea) in eval10_ideas().iter().enumerate() {
        let p = inputs.path().join(format!("idea{i:02}.json"));
        fs::write(&p, serde_json::to_string(idea).unwrap()).map_err(|e| e.to_string())?;
        idea_files.push(p.to_string_lossy().into_owned());
    }

    let tiny = graph("tiny");
    let eval10 = graph("eval10");
    let broken = graph("broken_quote");
    let with = |g: &[String], head: &[&str], tail: &[String]| -> Vec<String> {
        head.iter().map(|s| s.to_string()).chain(g.iter().cloned()).chain(tail.iter().cloned()).collect()
    };
    let s = |v: &[&str]| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };

    let mut commands: Vec<Vec<String>> = vec![
        with(&tiny, &["validate"], &[]),
        with(&broken, &["validate"], &[]),
        with(&tiny, &["evaluate"], &s(&["--idea", &fx("tiny/idea.json"), "--out", "e1.json"])),
        with(
            &tiny,
            &["evaluate"],
            &s(&["--idea", &fx("tiny/idea.json"), "--verdict", &fx("tiny/verdict.json"), "--out", "e2.json"]),
        ),
        with(&tiny, &["evaluate"], &s(&["--idea", &fx("tiny/idea_unknown.json"), "--out", "e3.json"])),
        with(
            &tiny,
            &["generate"],
            &s(&[
                "--query",
                "attention cost",
                "--proposer-response",
                &fx("tiny/proposer_response.json"),
                "--out",
                "g1.json",
            ]),
        ),
        with(&tiny, &["generate"], &s(&["--query", "QLoRA memory", "--out", "g2.json"])),
        with(
            &tiny,
            &["bench"],
            &s(&[
                "--reference",
                &fx("tiny/reference.json"),
                "--algos",
                "sgt-mcts,beam@1,beam@3,random-walk@50",
                "--csv",
                "b1.csv",
                "--out",
                "b1.json",
            ]),
        ),
        with(
            &tiny,
            &["bench"],
            &s(&[
                "--reference",
                &fx("tiny/reference.json"),
                "--algos",
                "sgt-mcts,random-walk",
                "--mode",
                "union",
                "--out",
                "b2.json",
            ]),
        ),
        s(&["synth", "--params", &fx("tiny/synth_params.json"), "--out", "synth"]),
    ];
    for (q, algo, out) in [
        ("QLoRA", "sgt-mcts", "l1.jsonl"),
        ("Mamba", "sgt-mcts", "l2.jsonl"),
        ("QLoRA", "beam@2", "l3.jsonl"),
        ("Mamba and LoRA", "random-walk@80", "l4.jsonl"),
        ("Perceiver", "sgt-mcts", "l5.jsonl"),
    ] {
        commands.push(with(&tiny, &["lineage"], &s(&["--query", q, "--algo", algo, "--out", out])));
    }
    for (i, f) in idea_files.iter().enumerate() {
        commands.push(with(&eval10, &["evaluate"], &s(&["--idea", f, "--out", &format!("eval10_{i:02}.json")])));
    }

    let (a, b) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
    let mut streams = [Vec::new(), Vec::new()];
    for cmd in &commands {
        for (k, dir) in [&a, &b].into_iter().enumerate() {
            let mut args: Vec<&str> = cmd.iter().map(String::as_str).collect();
            args.extend(["--seed", "17"]);
            let o = run(dir.path(), &args);
            streams[k].push((o.status.code(), o.stdout, o.stderr));
        }
    }
    for (i, (x, y)) in streams[0].iter().zip(&streams[1]).enumerate() {
        ensure(x == y, || format!("`{}` output differs between runs", commands[i].join(" ")))?;
    }
    let codes: BTreeSet<Option<i32>> = streams[0].iter().map(|s| s.0).collect();
    ensure(codes == BTreeSet::from([Some(0), Some(1)]), || format!("unexpected exit codes {codes:?}"))?;
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    ensure(sa.keys().eq(sb.keys()), || "runs produced different file sets".into())?;
    for (path, bytes) in &sa {
        ensure(&sb[path] == bytes, || format!("{} differs between runs", path.display()))?;
    }
    Ok(format!("{} commands, {} artifacts byte-identical across two runs", commands.len(), sa.len()))
}

fn criterion_7() -> Outcome {
    const M: usize = 12;
    let mut b = GraphBuilder::new();
    for i in 0..M {
        b.add_node(
            Node::Method(MethodNode {
                id: NodeId::from(format!("m{i}").as_str()),
                canonical_name: format!("Method{i}"),
                introduced_by: None,
                paper_count: None,
            }),
            None,
        );
    }
    let (g, _) = b.build().map_err(|e| e.to_string())?;
    let reg = AliasRegistry::from_graph(&g).map_err(|e| e.to_string())?;
    let id_of =
        |name: &str| -> Option<NodeId> { name.strip_prefix("Method").map(|i| NodeId::from(format!("m{i}").as_str())) };

    let mut rng = rng_for(7, 0);
    for case in 0..200 {
        let retrieved_len = rng.random_range(1..=8);
        let mut pool: Vec<usize> = (0..M).collect();
        let mut retrieved = Vec::new();
        for _ in 0..retrieved_len {
            let k = rng.random_range(0..pool.len());
            retrieved.push(NodeId::from(format!("m{}", pool.swap_remove(k)).as_str()));
        }
        let reference: Vec<String> = (0..rng.random_range(1..=8))
            .map(|_| {
                if rng.random_bool(0.15) {
                    format!("Ghost{}", rng.random_range(0..3))
                } else {
                    format!("Method{}", rng.random_range(0..M))
                }
            })
            .collect();

        let got = chain_metrics(&retrieved, &reference, &g, &reg);

        let ids: Vec<Option<NodeId>> = reference.iter().map(|n| id_of(n)).collect();
        let n = reference.len() as f64;
        let nr = ids.iter().filter(|r| r.as_ref().is_some_and(|id| retrieved.contains(id))).count() as f64 / n;
        let er = if reference.len() == 1 {
            nr
        } else {
            let mut hits = 0;
            for w in ids.windows(2) {
                let (Some(x), Some(y)) = (&w[0], &w[1]) else { continue };
                if (0..retrieved.len().saturating_sub(1)).any(|j| &retrieved[j] == x && &retrieved[j + 1] == y) {
                    hits += 1;
                }
            }
            hits as f64 / (n - 1.0)
        };
        let members: BTreeSet<&NodeId> = ids.iter().flatten().collect();
        let filtered: Vec<&NodeId> = retrieved.iter().filter(|x| members.contains(x)).collect();
        let is_subsequence = |sub: &[&NodeId]| {
            let mut it = ids.iter();
            sub.iter().all(|s| it.any(|r| r.as_ref() == Some(*s)))
        };
        let mut lcs = 0;
        for mask in 0u32..(1 << filtered.len()) {
            let sub: Vec<&NodeId> = (0..filtered.len()).filter(|i| mask & (1 << i) != 0).map(|i| filtered[i]).collect();
            if sub.len() > lcs && is_subsequence(&sub) {
                lcs = sub.len();
            }
        }
        let cas = lcs as f64 / n;
        ensure(got.nr == nr && got.er == er && got.cas == cas, || {
            format!("case {case}: {retrieved:?} vs {reference:?}: got {got:?}, oracle ({nr}, {er}, {cas})")
        })?;
    }
    Ok("200 random chain pairs match the brute-force oracles exactly".into())
}

fn criterion_8() -> Outcome {
    let fx = Eval10::load();
    let config = EvaluatorConfig::default();
    let empty = IdeaProfile::default();
    let unknown = IdeaProfile { problem: "Protein folding kinetics.".into(), ..Default::default() };
    for r in fx.reports(&[empty, unknown], &config) {
        ensure(r.fallback_used && r.overall == 6.5, || format!("fallback overall {}", r.overall))?;
    }

    let reports: Vec<EvaluationReport> =
        fx.reports(&eval10_ideas(), &config).into_iter().filter(|r| !r.fallback_used).collect();
    ensure(!reports.is_empty(), || "no scored reports".into())?;
    let mut rng = rng_for(8, 0);
    let relations = [DuplicateRelation::Duplicate, DuplicateRelation::Related, DuplicateRelation::Unrelated];
    let (mut capped, mut lowered) = (0, 0);
    for i in 0..500 {
        let base = &reports[i % reports.len()];
        let verdict = AdjudicatorVerdict {
            duplicate_relation: relations[rng.random_range(0..3)],
            coherence: rng.random_range(1.0..=10.0),
            novelty_validity: rng.random_range(1.0..=10.0),
            plausibility: rng.random_range(1.0..=10.0),
        };
        let out = apply_adjudication(base, &verdict, &config).map_err(|e| e.to_string())?;

        // Part A by hand: give back the relation's share of the penalty.
        let rate = config.adjudication.rate(verdict.duplicate_relation);
        let scores = base.scores.as_ref().unwrap();
        let mut s = scores.as_array();
        let novelty: f64 = scores.signal_breakdown[&Dimension::Novelty]
            .iter()
            .map(|x| if x.name == "duplicate_penalty" { (1.0 - rate) * base.duplicate.penalty } else { x.value })
            .sum();
        s[0] = (5.0 + novelty).clamp(1.0, 10.0);
        let restored = overall_oracle(s);

        ensure(out.overall <= restored + 1e-12, || {
            format!("verdict {i}: {} exceeds restored {restored}", out.overall)
        })?;
        if verdict.coherence.min(verdict.novelty_validity).min(verdict.plausibility) < 3.0 {
            ensure(out.overall <= 6.0, || format!("verdict {i}: low sub-score but overall {}", out.overall))?;
            capped += 1;
        }
        lowered += (out.overall < restored - 1e-12) as usize;
    }
    Ok(format!("fallback = 6.5; 500 verdicts bounded ({capped} hard-capped, {lowered} strictly lowered)"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("piecewise exactness", criterion_1, Duration::from_secs(1)),
        ("evaluator hand-oracle equivalence", criterion_2, Duration::from_secs(5)),
        ("lineage vs exhaustive enumeration", criterion_3, Duration::from_secs(120)),
        ("validator soundness", criterion_4, Duration::from_secs(1)),
        ("certificate closure", criterion_5, Duration::from_secs(30)),
        ("CLI determinism", criterion_6, Duration::MAX),
        ("metric oracle equivalence", criterion_7, Duration::from_secs(5)),
        ("fallback and adjudication bounds", criterion_8, Duration::MAX),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(format!(
                "panicked: {}",
                e.downcast_ref::<String>().cloned().unwrap_or_else(|| {
                    e.downcast_ref::<&str>().map_or_else(|| "unknown".into(), |s| s.to_string())
                })
            ))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|d| {
            if elapsed > limit {
                Err(format!("{d}; took {elapsed:.2?}, limit {limit:?}"))
            } else {
                Ok(d)
            }
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {}/8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
