//! Beam search and uniform random walks over the same admissible steps.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{valid_steps, LineageError, ScoredPath, SearchParams};
use crate::graph::{Direction, Edge, EdgeKey, Graph, NodeId};
use crate::rng::{rng_for, streams};

#[derive(Clone)]
struct Partial {
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    priors: Vec<f64>,
}

impl Partial {
    fn score(&self) -> f64 {
        if self.priors.is_empty() {
            0.0
        } else {
            self.priors.iter().sum::<f64>() / self.priors.len() as f64
        }
    }

    fn into_path(self) -> ScoredPath {
        let value = self.score();
        let n = self.nodes.len();
        ScoredPath { nodes: self.nodes, edges: self.edges, visits: vec![0; n], value }
    }
}

fn by_score(a: &Partial, b: &Partial) -> core::cmp::Ordering {
    b.score().total_cmp(&a.score()).then_with(|| a.nodes.cmp(&b.nodes))
}

/// Depth-synchronous beam search scored by mean edge prior. Returns every
/// chain that finished (no admissible step, or `max_depth` reached), best
/// first.
pub fn beam_search_baseline(
    graph: &Graph,
    seed: &NodeId,
    dir: Direction,
    beam_width: usize,
    params: &SearchParams,
    mask: &BTreeSet<EdgeKey>,
) -> Result<Vec<ScoredPath>, LineageError> {
    params.validate()?;
    if beam_width == 0 {
        return Err(LineageError::InvalidParams("beam width must be positive"));
    }
    let mut beam = vec![Partial { nodes: vec![seed.clone()], edges: Vec::new(), priors: Vec::new() }];
    let mut finished = Vec::new();
    for depth in 0..=params.max_depth {
        let mut next = Vec::new();
        for p in beam {
            let steps = if depth < params.max_depth {
                let visited: BTreeSet<&NodeId> = p.nodes.iter().collect();
                valid_steps(graph, p.nodes.last().expect("non-empty"), dir, &visited, mask)?
            } else {
                Vec::new()
            };
            if steps.is_empty() {
                finished.push(p);
                continue;
            }
            for s in steps {
                let mut q = p.clone();
                q.nodes.push(s.next);
                q.edges.push(s.edge);
                q.priors.push(s.prior);
                next.push(q);
            }
        }
        next.sort_by(by_score);
        next.truncate(beam_width);
        beam = next;
        if beam.is_empty() {
            break;
        }
    }
    finished.sort_by(by_score);
    Ok(finished.into_iter().map(Partial::into_path).collect())
}

/// Random-walk rollouts drawing uniformly among admissible steps. Returns
/// the distinct walks ranked by frequency (value = share of rollouts).
///
/// Backward walks use stream `RANDOM_WALK`, forward walks stream
/// `RANDOM_WALK + 16`, both under `rng_seed`.
pub fn random_walk_baseline(
    graph: &Graph,
    seed: &NodeId,
    dir: Direction,
    rollouts: u32,
    rng_seed: u64,
    params: &SearchParams,
    mask: &BTreeSet<EdgeKey>,
) -> Result<Vec<ScoredPath>, LineageError> {
    params.validate()?;
    if rollouts == 0 {
        return Err(LineageError::InvalidParams("rollouts must be positive"));
    }
    let stream = match dir {
        Direction::Backward => streams::RANDOM_WALK,
        Direction::Forward => streams::RANDOM_WALK + 16,
    };
    let mut rng = rng_for(rng_seed, stream);
    let mut counts: BTreeMap<Vec<NodeId>, (u32, Vec<Edge>)> = BTreeMap::new();
    for _ in 0..rollouts {
        let mut nodes = vec![seed.clone()];
        let mut edges = Vec::new();
        while edges.len() < params.max_depth {
            let visited: BTreeSet<&NodeId> = nodes.iter().collect();
            let mut steps = valid_steps(graph, nodes.last().expect("non-empty"), dir, &visited, mask)?;
            if steps.is_empty() {
                break;
            }
            let s = steps.swap_remove(rng.random_range(0..steps.len()));
            nodes.push(s.next);
            edges.push(s.edge);
        }
        counts.entry(nodes).or_insert((0, edges)).0 += 1;
    }
    let mut out: Vec<ScoredPath> = counts
        .into_iter()
        .map(|(nodes, (c, edges))| {
            let n = nodes.len();
            ScoredPath { nodes, edges, visits: vec![0; n], value: c as f64 / rollouts as f64 }
        })
        .collect();
    out.sort_by(|a, b| b.value.total_cmp(&a.value).then_with(|| a.nodes.cmp(&b.nodes)));
    Ok(out)
}
