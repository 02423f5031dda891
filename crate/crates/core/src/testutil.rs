//! Small graph fixtures shared by unit tests.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::*;

pub(crate) fn evidence(source: &str, target: &str, conf: f64) -> EvidenceRecord {
    EvidenceRecord {
        bottleneck_quote: format!("bottleneck of {target} seen by {source}"),
        bottleneck_description: format!("limited {target} capacity"),
        bottleneck_dimension: BottleneckDimension::ComputationalComplexity,
        mechanism_quote: format!("mechanism of {source}"),
        mechanism_description: format!("{source} rewires {target}"),
        tradeoff_sentence: format!("tradeoff of {source}"),
        improvement_dim: Some(BottleneckDimension::ComputationalComplexity),
        sacrifice_dim: None,
        confidence: conf,
    }
}

/// Methods `id` introduced by paper `P{id}` in `year`, connected by the given
/// (citing, cited, type, confidence) edges. Paper texts contain every quote
/// their edges need.
pub(crate) fn method_graph(methods: &[(&str, Option<i32>)], edges: &[(&str, &str, EdgeType, f64)]) -> Graph {
    let built = edges
        .iter()
        .map(|&(s, t, ty, c)| Edge {
            source: s.into(),
            target: t.into(),
            edge_type: ty,
            evidence: ty.is_causal().then(|| evidence(s, t, c)),
        })
        .collect();
    evidence_graph(methods, built)
}

/// Like [`method_graph`] with caller-built edges; quotes of causal edges are
/// appended to the citing method's paper.
pub(crate) fn evidence_graph(methods: &[(&str, Option<i32>)], edges: Vec<Edge>) -> Graph {
    let mut text: BTreeMap<String, String> = BTreeMap::new();
    for e in &edges {
        if let Some(ev) = &e.evidence {
            let entry = text.entry(e.source.as_str().into()).or_default();
            entry.push_str(&format!("{}. {}. {}. ", ev.bottleneck_quote, ev.mechanism_quote, ev.tradeoff_sentence));
        }
    }
    let mut b = GraphBuilder::new();
    for &(m, year) in methods {
        let pid = format!("P{m}");
        b.add_node(
            Node::Paper(PaperNode {
                id: pid.as_str().into(),
                title: format!("{m} paper"),
                abstract_text: String::new(),
                sections: Sections { method: text.get(m).cloned().unwrap_or_default(), ..Default::default() },
                year,
            }),
            None,
        );
        b.add_node(
            Node::Method(MethodNode {
                id: m.into(),
                canonical_name: m.into(),
                introduced_by: Some(pid.as_str().into()),
                paper_count: None,
            }),
            None,
        );
    }
    for e in edges {
        b.add_edge(e, None);
    }
    b.build().expect("fixture graph").0
}

/// Methods `M00..` with non-decreasing years and random strong edges from
/// newer to older methods, confidences drawn from a seeded RNG.
pub(crate) fn random_dag(seed: u64, n: usize, edge_prob: f64) -> Graph {
    use rand::Rng;
    let mut rng = crate::rng::rng_for(seed, 99);
    let names: Vec<String> = (0..n).map(|i| format!("M{i:02}")).collect();
    let years: Vec<Option<i32>> = (0..n).map(|i| Some(2000 + (i as i32) / 2)).collect();
    let types = [EdgeType::Extends, EdgeType::Improves, EdgeType::Replaces, EdgeType::Adapts];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.random::<f64>() < edge_prob {
                let ty = types[rng.random_range(0..types.len())];
                let conf = (rng.random_range(1..=100) as f64) / 100.0;
                edges.push((names[i].as_str(), names[j].as_str(), ty, conf));
            }
        }
    }
    let methods: Vec<(&str, Option<i32>)> = names.iter().map(String::as_str).zip(years).collect();
    method_graph(&methods, &edges)
}
