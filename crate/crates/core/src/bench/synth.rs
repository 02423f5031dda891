//! Seeded synthetic lineage graphs with known reference chains.
//!
//! A breadth-first tree of methods forms the strong-causal backbone (each
//! child cites its parent); root-to-leaf paths are the reference chains.
//! Cross links let a method also cite a non-parent of the previous layer,
//! creating diamonds, and noise edges add weak relations to older methods.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BenchError, ReferenceGraph};
use crate::graph::{
    BottleneckDimension, Edge, EdgeType, EvidenceRecord, Graph, GraphBuilder, MethodNode, Node, NodeId, PaperNode,
    Sections,
};
use crate::rng::{rng_for, streams, SeededRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthGraphParams {
    /// Upper bound on the number of methods.
    pub n_methods: usize,
    pub branching: usize,
    /// Layers, i.e. nodes on a full reference chain.
    pub depth: usize,
    pub noise_rate: f64,
    /// Probability that a method also cites a non-parent of the layer above.
    pub cross_link_rate: f64,
    pub year_span: i32,
    pub start_year: i32,
    pub seed: u64,
}

impl Default for SynthGraphParams {
    fn default() -> Self {
        Self {
            n_methods: 30,
            branching: 2,
            depth: 5,
            noise_rate: 0.2,
            cross_link_rate: 0.3,
            year_span: 15,
            start_year: 2005,
            seed: 0,
        }
    }
}

impl SynthGraphParams {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.n_methods == 0 || self.branching == 0 || self.depth == 0 || self.year_span <= 0 {
            return Err(BenchError::InfeasibleParams("sizes and year span must be positive"));
        }
        if !(0.0..=1.0).contains(&self.noise_rate) || !(0.0..=1.0).contains(&self.cross_link_rate) {
            return Err(BenchError::InfeasibleParams("rates must lie in [0, 1]"));
        }
        if self.depth * self.branching > self.n_methods {
            return Err(BenchError::InfeasibleParams("depth × branching exceeds n_methods"));
        }
        Ok(())
    }
}

const STRONG: [EdgeType; 4] = [EdgeType::Extends, EdgeType::Improves, EdgeType::Replaces, EdgeType::Adapts];
const WEAK: [EdgeType; 3] = [EdgeType::UsesComponent, EdgeType::Compares, EdgeType::Background];

fn name(i: usize) -> String {
    format!("Synth{i}")
}

fn method_id(i: usize) -> NodeId {
    NodeId::new(format!("m{i:03}"))
}

fn paper_id(i: usize) -> NodeId {
    NodeId::new(format!("p{i:03}"))
}

fn dimension(rng: &mut SeededRng) -> BottleneckDimension {
    BottleneckDimension::ALL[rng.random_range(0..BottleneckDimension::ALL.len())]
}

fn evidence(rng: &mut SeededRng, citing: usize, cited: usize, conf: f64) -> EvidenceRecord {
    let dim = dimension(rng);
    let sacrifice = dimension(rng);
    EvidenceRecord {
        bottleneck_quote: format!("{} is limited by its {}", name(cited), dim.as_str()),
        bottleneck_description: format!("{} of {}", dim.as_str(), name(cited)),
        bottleneck_dimension: dim,
        mechanism_quote: format!("{} adds a mechanism numbered {}{}", name(citing), citing, cited),
        mechanism_description: format!("mechanism {citing}-{cited}"),
        tradeoff_sentence: format!("{} trades away {} against {}", name(citing), sacrifice.as_str(), name(cited)),
        improvement_dim: Some(dim),
        sacrifice_dim: Some(sacrifice),
        confidence: conf,
    }
}

fn confidence(rng: &mut SeededRng, lo: u32, hi: u32) -> f64 {
    rng.random_range(lo..=hi) as f64 / 100.0
}

/// Builds the synthetic graph and its reference.
pub fn synthesize_graph(params: &SynthGraphParams) -> Result<(Graph, ReferenceGraph), BenchError> {
    params.validate()?;
    let mut rng = rng_for(params.seed, streams::SYNTH);

    // Backbone tree, breadth first.
    let mut layer = alloc::vec![0usize];
    let mut parent: Vec<Option<usize>> = alloc::vec![None];
    let mut children: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    let mut i = 0;
    while i < layer.len() {
        if layer[i] + 1 < params.depth {
            for _ in 0..params.branching {
                if layer.len() == params.n_methods {
                    break;
                }
                let c = layer.len();
                layer.push(layer[i] + 1);
                parent.push(Some(i));
                children.push(Vec::new());
                children[i].push(c);
            }
        }
        i += 1;
    }
    let n = layer.len();
    let step = (params.year_span / params.depth as i32).max(1);
    let years: Vec<i32> =
        layer.iter().map(|&l| params.start_year + l as i32 * step + rng.random_range(0..step)).collect();

    // (citing, cited, type, confidence)
    let mut links: Vec<(usize, usize, EdgeType, f64)> = Vec::new();
    for (c, p) in parent.iter().enumerate().skip(1) {
        let p = p.expect("non-root");
        let ty = STRONG[rng.random_range(0..STRONG.len())];
        links.push((c, p, ty, confidence(&mut rng, 60, 100)));
    }
    for c in 1..n {
        if layer[c] < 2 || rng.random::<f64>() >= params.cross_link_rate {
            continue;
        }
        let above: Vec<usize> = (0..n).filter(|&k| layer[k] + 1 == layer[c] && Some(k) != parent[c]).collect();
        if above.is_empty() {
            continue;
        }
        let t = above[rng.random_range(0..above.len())];
        let ty = STRONG[rng.random_range(0..STRONG.len())];
        links.push((c, t, ty, confidence(&mut rng, 30, 90)));
    }
    for c in 1..n {
        if rng.random::<f64>() >= params.noise_rate {
            continue;
        }
        let older: Vec<usize> =
            (0..n).filter(|&k| layer[k] < layer[c] && !links.iter().any(|l| l.0 == c && l.1 == k)).collect();
        if older.is_empty() {
            continue;
        }
        let t = older[rng.random_range(0..older.len())];
        let ty = WEAK[rng.random_range(0..WEAK.len())];
        links.push((c, t, ty, confidence(&mut rng, 20, 70)));
    }

    let mut edges = Vec::new();
    let mut text: Vec<String> = alloc::vec![String::new(); n];
    for &(s, t, ty, conf) in &links {
        let ev = ty.is_causal().then(|| evidence(&mut rng, s, t, conf));
        if let Some(ev) = &ev {
            text[s].push_str(&format!("{}. {}. {}. ", ev.bottleneck_quote, ev.mechanism_quote, ev.tradeoff_sentence));
        }
        edges.push(Edge { source: method_id(s), target: method_id(t), edge_type: ty, evidence: ev });
    }

    let mut b = GraphBuilder::new();
    for k in 0..n {
        b.add_node(
            Node::Paper(PaperNode {
                id: paper_id(k),
                title: format!("{} paper", name(k)),
                abstract_text: format!("We introduce {}.", name(k)),
                sections: Sections { method: core::mem::take(&mut text[k]), ..Default::default() },
                year: Some(years[k]),
            }),
            None,
        );
        b.add_node(
            Node::Method(MethodNode {
                id: method_id(k),
                canonical_name: name(k),
                introduced_by: Some(paper_id(k)),
                paper_count: None,
            }),
            None,
        );
    }
    for e in edges {
        b.add_edge(e, None);
    }
    let graph = b.build().map_err(|_| BenchError::InfeasibleParams("generated graph failed to build"))?.0;

    let mut chains = Vec::new();
    for leaf in (0..n).filter(|&k| children[k].is_empty()) {
        let mut chain = alloc::vec![name(leaf)];
        let mut cur = leaf;
        while let Some(p) = parent[cur] {
            chain.push(name(p));
            cur = p;
        }
        chain.reverse();
        chains.push(chain);
    }
    let reference = ReferenceGraph {
        methods: (0..n).map(name).collect(),
        edges: (1..n).map(|c| (name(parent[c].expect("non-root")), name(c))).collect(),
        chains,
    };
    Ok((graph, reference))
}
