//! Minimal separators, potential maximal cliques, blocks, almost-cliques and
//! width-k safety.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::cancel::{CancelToken, Cancelled};
use crate::exact::{decide_tw_leq, ExactError};
use crate::graph::{Graph, InducedGraph, VertexSet};

/// Components `C` of `g - s` with `N(C) = s`.
pub fn full_components(g: &Graph, s: &VertexSet) -> Vec<VertexSet> {
    g.components_without(s).into_iter().filter(|c| g.set_neighbors(c) == *s).collect()
}

/// Nonempty `s` with at least two full components.
pub fn is_minimal_separator(g: &Graph, s: &VertexSet) -> bool {
    !s.is_empty() && full_components(g, s).len() >= 2
}

/// All nonempty minimal separators of size at most `max_size`, sorted.
///
/// Seeds with `N(C)` for the components `C` of `g - N[v]`, then closes under
/// `S -> N(C)` for components `C` of `g - (S ∪ N(x))`, `x ∈ S`, discarding
/// anything larger than `max_size` along the way.
pub fn enumerate_min_seps(g: &Graph, max_size: usize, cancel: &CancelToken) -> Result<Vec<VertexSet>, Cancelled> {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut queue: VecDeque<VertexSet> = VecDeque::new();
    let offer = |s: VertexSet, seen: &mut HashSet<VertexSet>, queue: &mut VecDeque<VertexSet>| {
        if !s.is_empty() && s.len() <= max_size && seen.insert(s.clone()) {
            queue.push_back(s);
        }
    };
    for v in 0..g.n() {
        cancel.check()?;
        for c in g.components_without(&g.closed_neighbors(v)) {
            offer(g.set_neighbors(&c), &mut seen, &mut queue);
        }
    }
    while let Some(s) = queue.pop_front() {
        cancel.check()?;
        for x in &s {
            let removed = s.union(g.neighbors(x));
            for c in g.components_without(&removed) {
                offer(g.set_neighbors(&c), &mut seen, &mut queue);
            }
        }
    }
    let mut out: Vec<VertexSet> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Local characterization of potential maximal cliques: no full component of
/// `g - x`, and every non-adjacent pair of `x` shares a component neighborhood.
pub fn is_pmc(g: &Graph, x: &VertexSet) -> bool {
    if x.is_empty() {
        return false;
    }
    let nbhds: Vec<VertexSet> = g.components_without(x).iter().map(|c| g.set_neighbors(c)).collect();
    if nbhds.iter().any(|s| s == x) {
        return false;
    }
    let vs = x.to_vec();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if !g.has_edge(u, v) && !nbhds.iter().any(|s| s.contains(u) && s.contains(v)) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct Block {
    pub separator: VertexSet,
    pub component: VertexSet,
    /// `G[N[C]]` with `N(C)` completed, relabeled.
    pub realization: InducedGraph,
}

pub fn realize(g: &Graph, component: &VertexSet) -> Block {
    let separator = g.set_neighbors(component);
    let closed = component.union(&separator);
    let mut realization = g.induced(&closed);
    let local_sep = realization.from_host(&separator);
    realization.graph.make_clique(&local_sep);
    Block { separator, component: component.clone(), realization }
}

/// One block per component of `g - x`.
pub fn blocks_of(g: &Graph, x: &VertexSet) -> Vec<Block> {
    g.components_without(x).iter().map(|c| realize(g, c)).collect()
}

pub fn is_almost_clique(g: &Graph, s: &VertexSet) -> bool {
    almost_clique_apex(g, s).is_some()
}

/// `Some(None)` if `s` is a clique, `Some(Some(v))` if `s - v` is one, else `None`.
pub fn almost_clique_apex(g: &Graph, s: &VertexSet) -> Option<Option<usize>> {
    if g.is_clique(s) {
        return Some(None);
    }
    // A vertex whose removal helps must be an endpoint of every missing pair.
    let deficient = s.iter().find(|&v| !s.difference(&g.closed_neighbors(v)).is_empty())?;
    let mut cand = vec![deficient];
    cand.extend(s.difference(&g.closed_neighbors(deficient)).iter());
    cand.into_iter().find(|&v| {
        let mut rest = s.clone();
        rest.remove(v);
        g.is_clique(&rest)
    }).map(Some)
}

/// Whether `u` and `v` lie in different components of `h - s`. False if either is in `s`.
pub fn crosses(h: &Graph, s: &VertexSet, u: usize, v: usize) -> bool {
    if s.contains(u) || s.contains(v) {
        return false;
    }
    let rest = h.vertices().difference(s);
    !h.component_of(u, &rest).contains(v)
}

/// Width-k safety by the block criterion: every realization of a component of
/// `g - s` has treewidth at most `k`. Realization verdicts are memoized.
#[derive(Default)]
pub struct SafetyChecker {
    memo: HashMap<(Graph, usize), bool>,
    pub queries: usize,
    pub hits: usize,
}

impl SafetyChecker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_safe(&mut self, g: &Graph, s: &VertexSet, k: usize, cancel: &CancelToken) -> Result<bool, ExactError> {
        if s.len() > k + 1 {
            return Ok(false);
        }
        for c in g.components_without(s) {
            let r = realize(g, &c).realization.graph;
            self.queries += 1;
            let key = (r, k);
            let ok = match self.memo.get(&key) {
                Some(&b) => {
                    self.hits += 1;
                    b
                }
                None => {
                    let b = decide_tw_leq(&key.0, k, cancel)?.is_some();
                    self.memo.insert(key, b);
                    b
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn is_safe_for_width(g: &Graph, s: &VertexSet, k: usize, cancel: &CancelToken) -> Result<bool, ExactError> {
    SafetyChecker::new().is_safe(g, s, k, cancel)
}
