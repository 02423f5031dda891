//! SGT-MCTS over one traversal direction.
//!
//! Selection uses UCT plus the graph prior; expansion adds the
//! highest-confidence untried child; rollouts follow the greedy prior policy;
//! the whole root-to-rollout-end path is scored by [`rollout_reward`]. Leaves
//! that stop short of `max_depth` for lack of children push
//! `dead_end_penalty` into the value of every strict ancestor.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{greedy_pick, rollout_reward, valid_steps, LineageError, ScoredPath, SearchParams, Step};
use crate::graph::{Direction, Edge, EdgeKey, Graph, NodeId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TreeNodeStats {
    pub visits: u32,
    pub total_value: f64,
}

impl TreeNodeStats {
    pub fn mean(&self) -> f64 {
        if self.visits == 0 {
            0.0
        } else {
            self.total_value / self.visits as f64
        }
    }
}

/// Selection score; an unvisited child returns `+∞`.
pub fn sgt_uct(parent: &TreeNodeStats, child: &TreeNodeStats, prior: f64, params: &SearchParams) -> f64 {
    if child.visits == 0 {
        return f64::INFINITY;
    }
    let explore = libm::sqrt(libm::log(parent.visits as f64) / child.visits as f64);
    child.mean() + params.c_uct * explore + params.lambda * prior
}

#[derive(Clone, Debug)]
struct TreeNode {
    node: NodeId,
    parent: Option<usize>,
    edge: Option<Edge>,
    prior: f64,
    depth: usize,
    children: Vec<usize>,
    untried: Vec<Step>,
    dead_end: bool,
    stats: TreeNodeStats,
}

/// Arena of search-tree nodes; index 0 is the root (the seed).
#[derive(Clone, Debug)]
pub struct SearchTree {
    nodes: Vec<TreeNode>,
}

impl SearchTree {
    pub fn root_stats(&self) -> TreeNodeStats {
        self.nodes[0].stats
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest visit count over non-root nodes.
    pub fn max_visits(&self) -> u32 {
        self.nodes.iter().skip(1).map(|n| n.stats.visits).max().unwrap_or(0)
    }

    /// Stats of the tree node reached by following `path` (which starts at
    /// the seed), or `None` when the path leaves the tree.
    pub fn stats_of(&self, path: &[NodeId]) -> Option<TreeNodeStats> {
        self.locate(path).map(|i| self.nodes[i].stats)
    }

    /// Visits for every prefix of `path`; prefixes outside the tree get 0.
    pub fn path_visits(&self, path: &[NodeId]) -> Vec<u32> {
        let mut out = Vec::with_capacity(path.len());
        let mut cur = match path.first() {
            Some(n) if *n == self.nodes[0].node => Some(0),
            _ => None,
        };
        for (i, n) in path.iter().enumerate() {
            if i > 0 {
                cur = cur.and_then(|c| self.nodes[c].children.iter().copied().find(|&k| self.nodes[k].node == *n));
            }
            out.push(cur.map_or(0, |c| self.nodes[c].stats.visits));
        }
        out
    }

    fn locate(&self, path: &[NodeId]) -> Option<usize> {
        if path.first() != Some(&self.nodes[0].node) {
            return None;
        }
        let mut cur = 0;
        for n in &path[1..] {
            cur = self.nodes[cur].children.iter().copied().find(|&k| self.nodes[k].node == *n)?;
        }
        Some(cur)
    }

    fn path_to(&self, mut idx: usize) -> (Vec<NodeId>, Vec<Edge>, Vec<f64>) {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        let mut priors = Vec::new();
        loop {
            let n = &self.nodes[idx];
            nodes.push(n.node.clone());
            if let Some(e) = &n.edge {
                edges.push(e.clone());
                priors.push(n.prior);
            }
            match n.parent {
                Some(p) => idx = p,
                None => break,
            }
        }
        nodes.reverse();
        edges.reverse();
        priors.reverse();
        (nodes, edges, priors)
    }

    fn best_child(&self, idx: usize, params: &SearchParams) -> usize {
        let parent = &self.nodes[idx];
        let score = |k: usize| sgt_uct(&parent.stats, &self.nodes[k].stats, self.nodes[k].prior, params);
        *parent
            .children
            .iter()
            .max_by(|&&a, &&b| {
                score(a)
                    .total_cmp(&score(b))
                    .then_with(|| self.nodes[a].prior.total_cmp(&self.nodes[b].prior))
                    .then_with(|| self.nodes[b].node.cmp(&self.nodes[a].node))
            })
            .expect("caller checked children")
    }
}

/// Instrumentation for the value-conservation check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchCounters {
    pub iterations: u32,
    pub reward_to_root: f64,
    pub penalty_to_root: f64,
    pub dead_end_backprops: u32,
}

#[derive(Clone, Debug)]
pub struct DirectionSearch {
    pub direction: Direction,
    /// Best leaves by accumulated value, greedily completed to maximal paths.
    pub paths: Vec<ScoredPath>,
    pub tree: SearchTree,
    pub counters: SearchCounters,
}

struct Ctx<'a> {
    graph: &'a Graph,
    dir: Direction,
    mask: &'a BTreeSet<EdgeKey>,
    max_depth: usize,
}

impl Ctx<'_> {
    fn steps_from(&self, node: &NodeId, path: &[NodeId]) -> Result<Vec<Step>, LineageError> {
        let visited: BTreeSet<&NodeId> = path.iter().collect();
        valid_steps(self.graph, node, self.dir, &visited, self.mask)
    }

    fn new_node(
        &self,
        tree: &SearchTree,
        parent: Option<usize>,
        step: Option<Step>,
        node: NodeId,
    ) -> Result<TreeNode, LineageError> {
        let depth = parent.map_or(0, |p| tree.nodes[p].depth + 1);
        let mut path = parent.map_or_else(Vec::new, |p| tree.path_to(p).0);
        path.push(node.clone());
        let untried = if depth < self.max_depth { self.steps_from(&node, &path)? } else { Vec::new() };
        let dead_end = depth < self.max_depth && untried.is_empty();
        let (edge, prior) = match step {
            Some(s) => (Some(s.edge), s.prior),
            None => (None, 0.0),
        };
        Ok(TreeNode {
            node,
            parent,
            edge,
            prior,
            depth,
            children: Vec::new(),
            untried,
            dead_end,
            stats: Default::default(),
        })
    }

    /// Extends `nodes` greedily until `max_depth` edges or no valid step.
    fn greedy_complete(
        &self,
        nodes: &mut Vec<NodeId>,
        edges: &mut Vec<Edge>,
        priors: &mut Vec<f64>,
    ) -> Result<(), LineageError> {
        while edges.len() < self.max_depth {
            let last = nodes.last().expect("path has a root").clone();
            let steps = self.steps_from(&last, nodes)?;
            let Some(i) = greedy_pick(&steps) else { break };
            let s = steps.into_iter().nth(i).expect("index from pick");
            nodes.push(s.next);
            edges.push(s.edge);
            priors.push(s.prior);
        }
        Ok(())
    }
}

/// Runs `params.budget` iterations from `seed` in `dir`, ignoring edges in
/// `mask`, and returns the `top_k` best paths.
pub fn mcts_direction_search(
    graph: &Graph,
    seed: &NodeId,
    dir: Direction,
    params: &SearchParams,
    mask: &BTreeSet<EdgeKey>,
) -> Result<DirectionSearch, LineageError> {
    params.validate()?;
    let ctx = Ctx { graph, dir, mask, max_depth: params.max_depth };
    let mut tree = SearchTree { nodes: Vec::new() };
    let root = ctx.new_node(&tree, None, None, seed.clone())?;
    tree.nodes.push(root);
    let mut counters = SearchCounters::default();

    for _ in 0..params.budget {
        counters.iterations += 1;
        // Selection and expansion.
        let mut cur = 0;
        loop {
            if !tree.nodes[cur].untried.is_empty() {
                let step = tree.nodes[cur].untried.remove(0);
                let next = step.next.clone();
                let child = ctx.new_node(&tree, Some(cur), Some(step), next)?;
                tree.nodes.push(child);
                let idx = tree.nodes.len() - 1;
                tree.nodes[cur].children.push(idx);
                cur = idx;
                break;
            }
            if tree.nodes[cur].children.is_empty() {
                break;
            }
            cur = tree.best_child(cur, params);
        }

        // Rollout.
        let (mut nodes, mut edges, mut priors) = tree.path_to(cur);
        ctx.greedy_complete(&mut nodes, &mut edges, &mut priors)?;
        let reward = rollout_reward(&priors, params.max_depth);

        // Backpropagation.
        let dead_end = tree.nodes[cur].dead_end;
        let mut idx = Some(cur);
        while let Some(i) = idx {
            let n = &mut tree.nodes[i];
            n.stats.visits += 1;
            n.stats.total_value += reward;
            if dead_end && i != cur {
                n.stats.total_value += params.dead_end_penalty;
            }
            idx = n.parent;
        }
        counters.reward_to_root += reward;
        if dead_end {
            counters.dead_end_backprops += 1;
            if cur != 0 {
                counters.penalty_to_root += params.dead_end_penalty;
            }
        }
    }

    let paths = best_paths(&ctx, &tree, params.top_k)?;
    Ok(DirectionSearch { direction: dir, paths, tree, counters })
}

fn best_paths(ctx: &Ctx<'_>, tree: &SearchTree, top_k: usize) -> Result<Vec<ScoredPath>, LineageError> {
    let mut leaves: Vec<usize> = (0..tree.nodes.len()).filter(|&i| tree.nodes[i].children.is_empty()).collect();
    let paths: Vec<Vec<NodeId>> = leaves.iter().map(|&i| tree.path_to(i).0).collect();
    let mut order: Vec<usize> = (0..leaves.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (tree.nodes[leaves[a]].stats, tree.nodes[leaves[b]].stats);
        sb.total_value.total_cmp(&sa.total_value).then_with(|| paths[a].cmp(&paths[b]))
    });
    leaves = order.into_iter().map(|i| leaves[i]).collect();

    let mut out: Vec<ScoredPath> = Vec::new();
    for leaf in leaves {
        let (mut nodes, mut edges, mut priors) = tree.path_to(leaf);
        ctx.greedy_complete(&mut nodes, &mut edges, &mut priors)?;
        if out.iter().any(|p| p.nodes == nodes) {
            continue;
        }
        let visits = tree.path_visits(&nodes);
        out.push(ScoredPath { nodes, edges, visits, value: tree.nodes[leaf].stats.total_value });
        if out.len() == top_k {
            break;
        }
    }
    Ok(out)
}
