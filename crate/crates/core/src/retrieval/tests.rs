use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::alias::AliasRegistry;
use crate::graph::*;
use crate::testutil::method_graph;
use crate::text::content_words;

fn paper(id: &str, title: &str, abstract_text: &str, method: &str) -> Node {
    Node::Paper(PaperNode {
        id: id.into(),
        title: title.into(),
        abstract_text: abstract_text.into(),
        sections: Sections { method: method.into(), ..Default::default() },
        year: Some(2020),
    })
}

fn papers_only(papers: Vec<Node>) -> Graph {
    let mut b = GraphBuilder::new();
    for p in papers {
        b.add_node(p, None);
    }
    b.build().unwrap().0
}

/// Embeds through a fixed text → vector table; unknown text maps to zero.
struct ScriptedEmbedder(BTreeMap<String, Vec<f64>>);

impl EmbeddingProvider for ScriptedEmbedder {
    fn dim(&self) -> usize {
        2
    }
    fn embed(&self, text: &str) -> Vec<f64> {
        self.0.get(text).cloned().unwrap_or_else(|| vec![0.0; 2])
    }
}

struct ScriptedReranker(BTreeMap<String, f64>);

impl RerankProvider for ScriptedReranker {
    fn score(&self, _query: &str, candidate: &str) -> f64 {
        self.0[candidate]
    }
}

struct ConstReranker(f64);

impl RerankProvider for ConstReranker {
    fn score(&self, _: &str, _: &str) -> f64 {
        self.0
    }
}

#[test]
fn scripted_providers_reproduce_hand_fusion() {
    let rows = [
        ("d1", [1.0, 0.0], 2.0, 0.9403985389889411),
        ("d2", [0.0, 1.0], 0.0, 0.5),
        ("d3", [-1.0, 0.0], -1.0, 0.13447071068499755),
        ("d4", [0.6, 0.8], 3.0, 0.8762870634112168),
        ("d5", [0.8, 0.6], -2.0, 0.5096014610110587),
    ];
    let graph =
        papers_only(rows.iter().map(|(id, ..)| paper(&format!("P{id}"), id, &format!("summary {id}"), "")).collect());
    let mut table: BTreeMap<String, Vec<f64>> =
        rows.iter().map(|(id, v, ..)| (format!("summary {id}"), v.to_vec())).collect();
    table.insert("the idea".into(), vec![1.0, 0.0]);
    let logits = rows.iter().map(|(id, _, l, _)| (format!("summary {id}"), *l)).collect();
    let reg = AliasRegistry::new();
    let corpus = Corpus::build(&graph, &reg);
    let v = duplicate_risk(
        "the idea",
        &corpus,
        &ScriptedEmbedder(table),
        &ScriptedReranker(logits),
        &DuplicateConfig::default(),
    );
    assert_eq!(v.candidates.len(), 5);
    for (id, _, _, want) in rows {
        let c = v.candidates.iter().find(|c| c.id.as_str() == format!("P{id}")).unwrap();
        assert!((c.fused - want).abs() < 1e-12, "{id}: {} vs {want}", c.fused);
    }
    let order: Vec<&str> = v.top_candidates.iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(order, ["Pd1", "Pd4", "Pd5", "Pd2", "Pd3"]);
    assert!((v.best_score - 0.9403985389889411).abs() < 1e-12);
    assert_eq!(v.penalty, -4.0);
}

#[test]
fn identical_abstract_is_flagged() {
    let abs = "sparse mixture routing for long context retrieval with learned gates";
    let graph = papers_only(vec![
        paper("P1", "routing", abs, ""),
        paper("P2", "vision", "convolutional features for image segmentation", ""),
    ]);
    let reg = AliasRegistry::new();
    let corpus = Corpus::build(&graph, &reg);
    let v = duplicate_risk(abs, &corpus, &HashEmbedder::default(), &LexicalReranker::default(), &Default::default());
    assert!(v.best_score >= 0.85, "{}", v.best_score);
    assert_eq!(v.penalty, -4.0);
    assert_eq!(v.top_candidates[0].0.as_str(), "P1");
}

#[test]
fn orthogonal_idea_is_not_penalized() {
    let graph = papers_only(vec![paper("P1", "a", "alpha beta", ""), paper("P2", "b", "gamma delta", "")]);
    let mut table = BTreeMap::new();
    table.insert("alpha beta".to_string(), vec![1.0, 0.0]);
    table.insert("gamma delta".to_string(), vec![1.0, 0.0]);
    table.insert("idea".to_string(), vec![0.0, 1.0]);
    let reg = AliasRegistry::new();
    let corpus = Corpus::build(&graph, &reg);
    let v = duplicate_risk("idea", &corpus, &ScriptedEmbedder(table), &ConstReranker(-20.0), &Default::default());
    assert!(v.best_score < 0.55);
    assert_eq!(v.penalty, 0.0);
}

#[test]
fn empty_corpus_gives_zero_verdict() {
    let graph = Graph::empty();
    let reg = AliasRegistry::new();
    let corpus = Corpus::build(&graph, &reg);
    let v = duplicate_risk("x", &corpus, &HashEmbedder::default(), &LexicalReranker::default(), &Default::default());
    assert_eq!((v.best_score, v.penalty), (0.0, 0.0));
    assert!(v.top_candidates.is_empty());
}

#[test]
fn sparse_text_only_affects_pooling() {
    // Same summaries; the second corpus adds section text that changes BM25
    // heavily. With every paper pooled the fused scores must not move.
    let build = |extra: &str| {
        papers_only(vec![
            paper("P1", "t1", "one summary", extra),
            paper("P2", "t2", "two summary", ""),
            paper("P3", "t3", "three summary", ""),
        ])
    };
    let idea = "idea words repeated words";
    let reg = AliasRegistry::new();
    let plain = build("");
    let loaded = build("idea words repeated words idea words");
    let run = |g: &Graph| {
        let c = Corpus::build(g, &reg);
        duplicate_risk(idea, &c, &HashEmbedder::default(), &LexicalReranker::default(), &Default::default())
    };
    let (a, b) = (run(&plain), run(&loaded));
    let mut fa: Vec<_> = a.candidates.iter().map(|c| (c.id.clone(), c.fused)).collect();
    let mut fb: Vec<_> = b.candidates.iter().map(|c| (c.id.clone(), c.fused)).collect();
    fa.sort_by(|x, y| x.0.cmp(&y.0));
    fb.sort_by(|x, y| x.0.cmp(&y.0));
    assert_eq!(fa, fb);
}

#[test]
fn pool_is_capped_after_fusion() {
    let graph = papers_only((0..30).map(|i| paper(&format!("P{i:02}"), "t", &format!("doc {i} text"), "")).collect());
    let reg = AliasRegistry::new();
    let corpus = Corpus::build(&graph, &reg);
    let v =
        duplicate_risk("doc text", &corpus, &HashEmbedder::default(), &LexicalReranker::default(), &Default::default());
    assert_eq!(v.candidates.len(), 20);
    assert_eq!(v.penalty, step_penalty(v.best_score).unwrap());
}

/// Textbook Okapi scoring of one document, written independently of
/// `bm25_rank`.
fn okapi(query: &[String], doc: &[String], docs: &[Vec<String>]) -> f64 {
    let n = docs.len() as f64;
    let avgdl = docs.iter().map(Vec::len).sum::<usize>() as f64 / n;
    let mut s = 0.0;
    for q in query {
        let df = docs.iter().filter(|d| d.contains(q)).count() as f64;
        let tf = doc.iter().filter(|w| *w == q).count() as f64;
        let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln();
        s += idf * tf * 2.5 / (tf + 1.5 * (0.25 + 0.75 * doc.len() as f64 / avgdl));
    }
    s
}

#[test]
fn exact_title_retrieves_its_paper() {
    let titles = [
        "graph neural message passing",
        "contrastive image pretraining",
        "speculative decoding for language models",
        "low rank adaptation of large models",
        "diffusion models for audio synthesis",
        "retrieval augmented question answering",
        "mixture of experts routing",
        "state space sequence models with selective scans",
        "quantized training of transformers",
        "protein structure prediction with attention",
    ];
    let graph = papers_only(
        titles.iter().enumerate().map(|(i, t)| paper(&format!("P{i}"), t, "models trained on data", "")).collect(),
    );
    let reg = AliasRegistry::new();
    let corpus = Corpus::build(&graph, &reg);
    let ctx = retrieve_context(titles[7], &corpus, &RetrievalConfig::default());
    assert_eq!(ctx.papers[0].id.as_str(), "P7");

    let docs: Vec<Vec<String>> = corpus.docs().iter().map(|d| d.tokens.clone()).collect();
    let q = content_words(titles[7]);
    let mut brute: Vec<(usize, f64)> = docs.iter().enumerate().map(|(i, d)| (i, okapi(&q, d, &docs))).collect();
    brute.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    assert_eq!(corpus.docs()[brute[0].0].id.as_str(), "P7");
    for p in &ctx.papers {
        let i = corpus.docs().iter().position(|d| d.id == p.id).unwrap();
        assert!((p.bm25 - okapi(&q, &docs[i], &docs)).abs() < 1e-12);
    }
}

#[test]
fn alias_hits_dominate_lexical_overlap() {
    let mut graph_b = GraphBuilder::new();
    graph_b.add_node(paper("P1", "uses lora here", "", ""), None);
    graph_b.add_node(paper("P2", "lora lora again", "", ""), None);
    graph_b.add_node(paper("P3", "lora third", "", ""), None);
    graph_b.add_node(paper("P4", "efficient tuning tuning tuning efficient", "", ""), None);
    graph_b.add_node(
        Node::Method(MethodNode {
            id: "lora".into(),
            canonical_name: "LoRA".into(),
            introduced_by: None,
            paper_count: None,
        }),
        None,
    );
    let graph = graph_b.build().unwrap().0;
    let reg = AliasRegistry::from_graph(&graph).unwrap();
    let corpus = Corpus::build(&graph, &reg);
    let ctx = retrieve_context("LoRA for efficient tuning", &corpus, &RetrievalConfig::default());
    assert_eq!(ctx.methods, vec![NodeId::from("lora")]);
    let ids: Vec<&str> = ctx.paper_ids().map(NodeId::as_str).collect();
    assert_eq!(&ids[..3], ["P2", "P1", "P3"]);
    assert_eq!(ids[3], "P4");
    assert_eq!(corpus.paper_count(&"lora".into()), 3);
}

#[test]
fn unrelated_query_gives_empty_context() {
    let graph = method_graph(&[("A", Some(2019)), ("B", Some(2020))], &[("B", "A", EdgeType::Extends, 0.9)]);
    let reg = AliasRegistry::from_graph(&graph).unwrap();
    let corpus = Corpus::build(&graph, &reg);
    let ctx = retrieve_context("zebra xylophone", &corpus, &RetrievalConfig::default());
    assert!(ctx.methods.is_empty() && ctx.papers.is_empty() && ctx.edges.is_empty());
}

#[test]
fn context_edges_are_incident_and_causal() {
    let graph = method_graph(
        &[("A", Some(2018)), ("B", Some(2019)), ("C", Some(2020)), ("D", Some(2021))],
        &[
            ("B", "A", EdgeType::Extends, 0.9),
            ("C", "B", EdgeType::Improves, 0.8),
            ("D", "C", EdgeType::Background, 0.0),
            ("D", "A", EdgeType::Adapts, 0.7),
        ],
    );
    let reg = AliasRegistry::from_graph(&graph).unwrap();
    let corpus = Corpus::build(&graph, &reg);
    let cfg = RetrievalConfig { k: 1, ..Default::default() };
    let ctx = retrieve_context("what does C change", &corpus, &cfg);
    let in_px: Vec<&NodeId> = ctx.paper_ids().collect();
    assert_eq!(in_px.len(), 1);
    assert!(!ctx.edges.is_empty());
    for e in &ctx.edges {
        assert!(e.edge_type.is_causal());
        assert!([&e.source, &e.target].iter().any(|n| graph.paper_of(n).is_some_and(|p| in_px.contains(&p))));
    }
    assert_eq!(ctx.bottlenecks.len(), ctx.edges.len());
    for (b, e) in ctx.bottlenecks.iter().zip(&ctx.edges) {
        assert_eq!(b.quote, e.evidence.as_ref().unwrap().bottleneck_quote);
    }
}
