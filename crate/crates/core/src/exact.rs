//! Exact treewidth for small graphs: a positive-instance-driven decider built
//! from feasible blocks, the dynamic program over a given set of potential
//! maximal cliques, and size-bounded PMC enumeration.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::cancel::{CancelToken, Cancelled};
use crate::graph::{Graph, VertexSet};
use crate::lower::minor_min_width;
use crate::separators::{enumerate_min_seps, full_components, is_pmc};
use crate::td::TreeDecomposition;
use crate::triangulation::{min_fill_order, td_from_order};

/// Largest graph the exact routines accept.
pub const SIZE_CAP: usize = 64;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ExactError {
    #[error("cancelled")]
    Cancelled,
    #[error("graph has {n} vertices, exact cap is {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
}

impl From<Cancelled> for ExactError {
    fn from(_: Cancelled) -> Self {
        ExactError::Cancelled
    }
}

fn check_cap(g: &Graph) -> Result<(), ExactError> {
    if g.n() > SIZE_CAP {
        Err(ExactError::SizeCapExceeded { n: g.n(), cap: SIZE_CAP })
    } else {
        Ok(())
    }
}

/// An insertion-ordered set of verified potential maximal cliques.
#[derive(Clone, Debug, Default)]
pub struct PmcSet {
    members: Vec<VertexSet>,
    index: HashSet<VertexSet>,
}

impl PmcSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `x` if it is a PMC of `g` not yet present.
    pub fn insert(&mut self, g: &Graph, x: VertexSet) -> bool {
        if self.index.contains(&x) || !is_pmc(g, &x) {
            return false;
        }
        self.insert_unchecked(x)
    }

    pub(crate) fn insert_unchecked(&mut self, x: VertexSet) -> bool {
        if self.index.insert(x.clone()) {
            self.members.push(x);
            true
        } else {
            false
        }
    }

    pub fn from_sets<I: IntoIterator<Item = VertexSet>>(g: &Graph, sets: I) -> Self {
        let mut p = PmcSet::new();
        for s in sets {
            p.insert(g, s);
        }
        p
    }

    pub fn contains(&self, x: &VertexSet) -> bool {
        self.index.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, VertexSet> {
        self.members.iter()
    }

    /// Keeps members satisfying `keep`, preserving order.
    pub fn retain<F: FnMut(&VertexSet) -> bool>(&mut self, mut keep: F) {
        self.members.retain(|x| keep(x));
        self.index = self.members.iter().cloned().collect();
    }

    pub fn extend_from(&mut self, other: &PmcSet) {
        for x in other.iter() {
            self.insert_unchecked(x.clone());
        }
    }
}

#[derive(Clone, Debug)]
pub struct DpResult {
    /// Minimum width over tree decompositions whose bags all come from the set.
    pub value: Option<usize>,
    pub witness: Option<TreeDecomposition>,
}

/// Dynamic program over blocks restricted to bags from `pi`.
///
/// Blocks are the components of `g - Ω` for `Ω ∈ pi`. `Ω` is a candidate root
/// bag for block `C` when `N(C) ⊂ Ω ⊆ N[C]`; its children are the components
/// of `g - Ω` inside `C`.
pub fn tw_over_pi(g: &Graph, pi: &PmcSet, cancel: &CancelToken) -> Result<DpResult, Cancelled> {
    let members = pi.members();
    let mut block_id: HashMap<VertexSet, usize> = HashMap::new();
    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut comps_of: Vec<Vec<usize>> = Vec::with_capacity(members.len());
    for omega in members {
        cancel.check()?;
        let ids = g
            .components_without(omega)
            .into_iter()
            .map(|c| {
                let next = blocks.len();
                *block_id.entry(c.clone()).or_insert_with(|| {
                    blocks.push(c);
                    next
                })
            })
            .collect();
        comps_of.push(ids);
    }
    let all = g.vertices();
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); blocks.len()];
    for (p, omega) in members.iter().enumerate() {
        cancel.check()?;
        for &e in &comps_of[p] {
            let s = g.set_neighbors(&blocks[e]);
            let rest = omega.difference(&s);
            let Some(x) = rest.first() else { continue };
            let c = g.component_of(x, &all.difference(&s));
            if !rest.is_subset(&c) || g.set_neighbors(&c) != s {
                continue;
            }
            if let Some(&cid) = block_id.get(&c) {
                if candidates[cid].last() != Some(&p) {
                    candidates[cid].push(p);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&b| blocks[b].len());
    let mut value: Vec<Option<usize>> = vec![None; blocks.len()];
    let mut choice: Vec<usize> = vec![usize::MAX; blocks.len()];
    let eval = |p: usize, within: Option<&VertexSet>, value: &[Option<usize>]| -> Option<usize> {
        let mut w = members[p].len() - 1;
        for &d in &comps_of[p] {
            if within.is_none_or(|c| blocks[d].intersects(c)) {
                w = w.max(value[d]?);
            }
        }
        Some(w)
    };
    for &b in &order {
        cancel.check()?;
        for &p in &candidates[b] {
            if let Some(w) = eval(p, Some(&blocks[b]), &value) {
                if value[b].is_none_or(|cur| w < cur) {
                    value[b] = Some(w);
                    choice[b] = p;
                }
            }
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for p in 0..members.len() {
        if let Some(w) = eval(p, None, &value) {
            if best.is_none_or(|(bw, _)| w < bw) {
                best = Some((w, p));
            }
        }
    }
    let Some((w, root)) = best else {
        return Ok(DpResult { value: None, witness: None });
    };
    let mut bags = vec![members[root].clone()];
    let mut edges = Vec::new();
    let mut stack: Vec<(usize, usize)> = comps_of[root].iter().map(|&d| (d, 0)).collect();
    while let Some((b, parent)) = stack.pop() {
        let p = choice[b];
        let id = bags.len();
        bags.push(members[p].clone());
        edges.push((parent, id));
        for &d in &comps_of[p] {
            if blocks[d].intersects(&blocks[b]) {
                stack.push((d, id));
            }
        }
    }
    Ok(DpResult { value: Some(w), witness: Some(TreeDecomposition::new(bags, edges)) })
}

/// Positive-instance-driven search for a width-`k` decomposition of a
/// connected graph. Feasible blocks are components `C` avoiding a fixed root
/// vertex `r` whose closed neighborhood has a width-`k` decomposition with
/// `N(C)` in one bag.
struct Pid<'a> {
    g: &'a Graph,
    k: usize,
    r: usize,
    all: VertexSet,
    /// Feasible block -> its top bag.
    feasible: HashMap<VertexSet, VertexSet>,
    oblocks: HashSet<VertexSet>,
    olist: Vec<VertexSet>,
    work: Vec<VertexSet>,
    /// Feasible-block count at the last evaluation of each candidate bag.
    evaluated: HashMap<VertexSet, usize>,
    root: Option<VertexSet>,
}

impl<'a> Pid<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        let r = (0..g.n()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
        Pid {
            g,
            k,
            r,
            all: g.vertices(),
            feasible: HashMap::new(),
            oblocks: HashSet::new(),
            olist: Vec::new(),
            work: Vec::new(),
            evaluated: HashMap::new(),
            root: None,
        }
    }

    /// Tries `omega` as a bag; returns true once a full decomposition exists.
    fn evaluate(&mut self, omega: VertexSet) -> bool {
        if omega.len() > self.k + 1 {
            return false;
        }
        let nf = self.feasible.len();
        if self.evaluated.get(&omega) == Some(&nf) {
            return false;
        }
        self.evaluated.insert(omega.clone(), nf);
        let g = self.g;
        let comps = g.components_without(&omega);
        if omega.contains(self.r) && comps.iter().all(|c| self.feasible.contains_key(c)) {
            self.root = Some(omega);
            return true;
        }
        for e in &comps {
            let s = g.set_neighbors(e);
            let rest = omega.difference(&s);
            let Some(x) = rest.first() else { continue };
            let c = g.component_of(x, &self.all.difference(&s));
            if !rest.is_subset(&c) || c.contains(self.r) || self.feasible.contains_key(&c) {
                continue;
            }
            if comps.iter().filter(|d| d.intersects(&c)).all(|d| self.feasible.contains_key(d)) {
                let bag = g.set_neighbors(&c).union(&rest);
                self.feasible.insert(c.clone(), bag);
                self.work.push(c);
            }
        }
        false
    }

    fn run(&mut self, cancel: &CancelToken) -> Result<bool, Cancelled> {
        let g = self.g;
        for x in 0..g.n() {
            if self.evaluate(g.closed_neighbors(x)) {
                return Ok(true);
            }
        }
        while let Some(c) = self.work.pop() {
            cancel.check()?;
            let closed = c.union(&g.set_neighbors(&c));
            let mut fresh = vec![c.clone()];
            for u in &self.olist {
                if u.intersects(&closed) {
                    continue;
                }
                let w = u.union(&c);
                if !self.oblocks.contains(&w) && g.set_neighbors(&w).len() <= self.k + 1 {
                    fresh.push(w);
                }
            }
            for w in fresh {
                if !self.oblocks.insert(w.clone()) {
                    continue;
                }
                self.olist.push(w.clone());
                let nw = g.set_neighbors(&w);
                for q in &nw {
                    let omega = nw.union(&g.neighbors(q).difference(&w));
                    if self.evaluate(omega) {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    fn witness(&self) -> TreeDecomposition {
        let g = self.g;
        let root = self.root.clone().expect("witness requested before success");
        let mut bags = vec![root.clone()];
        let mut edges = Vec::new();
        let mut stack: Vec<(VertexSet, usize)> = g.components_without(&root).into_iter().map(|c| (c, 0)).collect();
        while let Some((c, parent)) = stack.pop() {
            let bag = self.feasible[&c].clone();
            let id = bags.len();
            edges.push((parent, id));
            for d in g.components(&c.difference(&bag)) {
                stack.push((d, id));
            }
            bags.push(bag);
        }
        TreeDecomposition::new(bags, edges)
    }
}

fn decide_connected(g: &Graph, k: usize, cancel: &CancelToken) -> Result<Option<TreeDecomposition>, Cancelled> {
    if g.n() <= k + 1 {
        return Ok(Some(TreeDecomposition::trivial(g.n())));
    }
    let mut pid = Pid::new(g, k);
    Ok(if pid.run(cancel)? { Some(pid.witness()) } else { None })
}

/// Whether `tw(g) <= k`, with a width-at-most-`k` witness when it is.
pub fn decide_tw_leq(g: &Graph, k: usize, cancel: &CancelToken) -> Result<Option<TreeDecomposition>, ExactError> {
    check_cap(g)?;
    if k + 1 >= g.n() {
        return Ok(Some(TreeDecomposition::trivial(g.n())));
    }
    if minor_min_width(g) > k {
        return Ok(None);
    }
    let order = min_fill_order(g);
    let greedy = td_from_order(g, &order);
    if greedy.width <= k {
        return Ok(Some(greedy));
    }
    let mut parts = Vec::new();
    for comp in g.components(&g.vertices()) {
        let sub = g.induced(&comp);
        match decide_connected(&sub.graph, k, cancel)? {
            Some(td) => parts.push(td.relabel(&sub.original, g.n())),
            None => return Ok(None),
        }
    }
    Ok(Some(TreeDecomposition::join(parts)))
}

/// Treewidth and an optimal decomposition. `lb_hint` must not exceed the true
/// treewidth; `ub_hint` only bounds the search.
pub fn exact_tw(
    g: &Graph,
    lb_hint: Option<usize>,
    ub_hint: Option<usize>,
    cancel: &CancelToken,
) -> Result<(usize, TreeDecomposition), ExactError> {
    check_cap(g)?;
    if g.n() == 0 {
        return Ok((0, TreeDecomposition::new(Vec::new(), Vec::new())));
    }
    let greedy = td_from_order(g, &min_fill_order(g));
    let lb = minor_min_width(g).max(lb_hint.unwrap_or(0));
    let ub = greedy.width.min(ub_hint.map_or(usize::MAX, |h| h + 1));
    for k in lb..ub {
        if let Some(td) = decide_tw_leq(g, k, cancel)? {
            return Ok((k, td));
        }
    }
    Ok((greedy.width, greedy))
}

/// All potential maximal cliques of size at most `bound`, in ascending order.
///
/// Every PMC is `N[x]` or `N(U) ∪ (N(q) - U)` for `q ∈ N(U)`, where `U` is the
/// union of the components of `g - Ω` avoiding a fixed root vertex. Those
/// components are full components of minimal separators of size `< bound`.
pub fn enumerate_pmcs_upto(g: &Graph, bound: usize, cancel: &CancelToken) -> Result<PmcSet, ExactError> {
    let mut found: Vec<VertexSet> = Vec::new();
    for comp in g.components(&g.vertices()) {
        let sub = g.induced(&comp);
        for x in pmcs_connected(&sub.graph, bound, cancel)? {
            found.push(sub.to_host(&x, g.n()));
        }
    }
    found.sort();
    let mut out = PmcSet::new();
    for x in found {
        out.insert_unchecked(x);
    }
    Ok(out)
}

fn pmcs_connected(g: &Graph, bound: usize, cancel: &CancelToken) -> Result<Vec<VertexSet>, ExactError> {
    let mut cands: HashSet<VertexSet> = HashSet::new();
    for x in 0..g.n() {
        cands.insert(g.closed_neighbors(x));
    }
    if bound >= 2 {
        let r = 0;
        let mut blocks: Vec<VertexSet> = Vec::new();
        let mut seen: HashSet<VertexSet> = HashSet::new();
        for s in enumerate_min_seps(g, bound - 1, cancel)? {
            for c in full_components(g, &s) {
                if !c.contains(r) && seen.insert(c.clone()) {
                    blocks.push(c);
                }
            }
        }
        blocks.sort();
        let mut olist: Vec<VertexSet> = Vec::new();
        let mut oset: HashSet<VertexSet> = HashSet::new();
        for c in &blocks {
            cancel.check()?;
            let closed = c.union(&g.set_neighbors(c));
            let mut fresh = vec![c.clone()];
            for u in &olist {
                if !u.intersects(&closed) {
                    let w = u.union(c);
                    if g.set_neighbors(&w).len() <= bound {
                        fresh.push(w);
                    }
                }
            }
            for w in fresh {
                if oset.insert(w.clone()) {
                    olist.push(w);
                }
            }
        }
        for w in &olist {
            let nw = g.set_neighbors(w);
            for q in &nw {
                cands.insert(nw.union(&g.neighbors(q).difference(w)));
            }
        }
    }
    let mut out: Vec<VertexSet> = cands.into_iter().filter(|x| x.len() <= bound && is_pmc(g, x)).collect();
    out.sort();
    Ok(out)
}
