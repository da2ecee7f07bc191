//! Upper bounds from sets of potential maximal cliques. A solution `Π` is
//! improved by merging it with independently generated solutions; merging
//! adds PMCs from minimal triangulations of the region between a bag of one
//! and a bag of the other.

use rand::Rng;

use crate::cancel::CancelToken;
use crate::exact::{exact_tw, tw_over_pi, PmcSet};
use crate::graph::{Graph, VertexSet};
use crate::preprocess::realize_part;
use crate::separators::is_pmc;
use crate::td::TreeDecomposition;
use crate::triangulation::{maximal_cliques, minimalize, mmaf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UbParams {
    /// Regions up to this size are triangulated exactly.
    pub base_size: usize,
    /// Merge partners tried per merge.
    pub n_try: usize,
    /// Greedy triangulations per initial solution.
    pub n_initial_greedy: usize,
    /// Nesting limit for improve.
    pub max_depth: usize,
}

impl Default for UbParams {
    fn default() -> Self {
        UbParams { base_size: 60, n_try: 50, n_initial_greedy: 10, max_depth: 32 }
    }
}

/// A PMC set with its value `tw_Π(G)` and a decomposition attaining it.
#[derive(Clone, Debug)]
pub struct Solution {
    pub pi: PmcSet,
    pub value: usize,
    pub best_td: TreeDecomposition,
}

impl Solution {
    /// Evaluates `pi`; `None` if it admits no decomposition or on cancellation.
    pub fn evaluate(g: &Graph, pi: PmcSet, cancel: &CancelToken) -> Option<Solution> {
        let r = tw_over_pi(g, &pi, cancel).ok()?;
        Some(Solution { pi, value: r.value?, best_td: r.witness? })
    }

    /// Drops members with more than `k + 2` vertices. The value is kept as
    /// long as `k` is at least the current value.
    pub fn shrink(&mut self, k: usize) {
        self.pi.retain(|x| x.len() <= k + 2);
    }
}

/// Best of `n_initial_greedy` randomized min-average-fill triangulations.
pub fn initial_solution<R: Rng + ?Sized>(g: &Graph, params: &UbParams, rng: &mut R) -> Solution {
    let best = (0..params.n_initial_greedy.max(1))
        .map(|_| mmaf(g, rng))
        .min_by_key(|t| t.width())
        .expect("at least one triangulation");
    let td = best.tree_decomposition();
    let pi = PmcSet::from_sets(g, best.cliques);
    Solution { value: td.width, pi, best_td: td }
}

/// Maximal cliques of a minimal triangulation inside the fill of `td`.
fn cliques_within(h: &Graph, td: &TreeDecomposition) -> Option<Vec<VertexSet>> {
    let mut filled = h.clone();
    for bag in &td.bags {
        filled.make_clique(bag);
    }
    maximal_cliques(&minimalize(h, &filled))
}

/// Minimal triangulation of `h`: exact below `base_size` vertices, greedy above.
fn small_triangulation<R: Rng + ?Sized>(h: &Graph, params: &UbParams, rng: &mut R, cancel: &CancelToken) -> Option<Vec<VertexSet>> {
    if h.n() <= params.base_size {
        let (_, td) = exact_tw(h, None, None, cancel).ok()?;
        cliques_within(h, &td)
    } else {
        Some(mmaf(h, rng).cliques)
    }
}

/// Component of `G - x` with the most vertices; the smallest vertex wins ties.
fn largest_component(g: &Graph, x: &VertexSet) -> Option<VertexSet> {
    g.components_without(x).into_iter().max_by_key(|c| (c.len(), std::cmp::Reverse(c.first())))
}

/// New PMCs found by grafting regions between a random bag of `pi` and
/// suitable bags of `omega`.
pub fn merge_candidates<R: Rng + ?Sized>(
    g: &Graph,
    pi: &Solution,
    omega: &Solution,
    params: &UbParams,
    rng: &mut R,
    cancel: &CancelToken,
) -> Vec<VertexSet> {
    let mut found = Vec::new();
    if pi.pi.is_empty() {
        return found;
    }
    let x = &pi.pi.members()[rng.random_range(0..pi.pi.len())];
    let Some(c) = largest_component(g, x) else {
        return found;
    };
    let nc = c.union(&g.set_neighbors(&c));
    let mut cands: Vec<(usize, VertexSet)> = Vec::new();
    for y in omega.pi.iter() {
        if y == x || !y.is_subset(&nc) || y.len() > pi.value {
            continue;
        }
        let Some(d) = g.components_without(y).into_iter().find(|d| x.is_subset(&d.union(&g.set_neighbors(d)))) else {
            continue;
        };
        let u = nc.intersection(&d.union(&g.set_neighbors(&d)));
        cands.push((u.len(), u));
    }
    cands.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    cands.dedup_by(|a, b| a.1 == b.1);
    for (_, u) in cands.into_iter().take(params.n_try) {
        if cancel.is_cancelled() {
            break;
        }
        let h = realize_part(g, &u);
        let Some(cliques) = small_triangulation(&h.graph, params, rng, cancel) else {
            break;
        };
        let width = cliques.iter().map(|q| q.len()).max().unwrap_or(1) - 1;
        if width > pi.value {
            continue;
        }
        for q in cliques {
            let q = h.to_host(&q, g.n());
            if is_pmc(g, &q) {
                found.push(q);
            }
        }
    }
    found
}

/// `Π ∪ Ω` plus the PMCs from [`merge_candidates`].
pub fn merge<R: Rng + ?Sized>(
    g: &Graph,
    pi: &Solution,
    omega: &Solution,
    params: &UbParams,
    rng: &mut R,
    cancel: &CancelToken,
) -> Solution {
    let extra = merge_candidates(g, pi, omega, params, rng, cancel);
    let mut set = pi.pi.clone();
    set.extend_from(&omega.pi);
    for q in extra {
        set.insert_unchecked(q);
    }
    match Solution::evaluate(g, set, cancel) {
        Some(s) => s,
        // Only reachable on cancellation: fall back to the better input.
        None => if omega.value < pi.value { omega.clone() } else { pi.clone() },
    }
}

/// Merges `pi` with a fresh solution that was itself improved until it is
/// no worse than `pi`.
pub fn improve<R: Rng + ?Sized>(g: &Graph, pi: &Solution, params: &UbParams, rng: &mut R, cancel: &CancelToken) -> Solution {
    improve_at(g, pi, params, rng, cancel, 0)
}

fn improve_at<R: Rng + ?Sized>(
    g: &Graph,
    pi: &Solution,
    params: &UbParams,
    rng: &mut R,
    cancel: &CancelToken,
    depth: usize,
) -> Solution {
    let mut omega = initial_solution(g, params, rng);
    while omega.value > pi.value && depth < params.max_depth {
        if cancel.is_cancelled() {
            return pi.clone();
        }
        omega = improve_at(g, &omega, params, rng, cancel, depth + 1);
    }
    if cancel.is_cancelled() {
        return pi.clone();
    }
    merge(g, pi, &omega, params, rng, cancel)
}

/// Resumable upper-bound iteration: one [`UbRun::step`] is one improve.
#[derive(Clone, Debug)]
pub struct UbRun {
    pub sol: Solution,
    params: UbParams,
}

impl UbRun {
    pub fn start<R: Rng + ?Sized>(g: &Graph, params: UbParams, rng: &mut R) -> Self {
        UbRun { sol: initial_solution(g, &params, rng), params }
    }

    pub fn value(&self) -> usize {
        self.sol.value
    }

    /// Adds the PMCs of a minimal triangulation refining `td`. Returns true
    /// when the value dropped.
    pub fn absorb(&mut self, g: &Graph, td: &TreeDecomposition, cancel: &CancelToken) -> bool {
        if td.validate(g).is_err() || td.width >= self.sol.value {
            return false;
        }
        let Some(cliques) = cliques_within(g, td) else {
            return false;
        };
        let mut set = self.sol.pi.clone();
        for q in cliques {
            set.insert(g, q);
        }
        match Solution::evaluate(g, set, cancel) {
            Some(next) if next.value < self.sol.value => {
                self.sol = next;
                let k = self.sol.value;
                self.sol.shrink(k);
                true
            }
            _ => false,
        }
    }

    /// One improve. Returns true when the value dropped; the set is then
    /// shrunk to members of size at most `value + 2`.
    pub fn step<R: Rng + ?Sized>(&mut self, g: &Graph, rng: &mut R, cancel: &CancelToken) -> bool {
        let next = improve(g, &self.sol, &self.params, rng, cancel);
        if next.value < self.sol.value {
            self.sol = next;
            let k = self.sol.value;
            self.sol.shrink(k);
            true
        } else {
            if next.pi.len() > self.sol.pi.len() {
                self.sol = next;
            }
            false
        }
    }
}

/// Improves until the value meets `lower()` or `cancel` fires, calling
/// `emit` for the initial value and each improvement.
pub fn ub_main_loop<R, L, E>(g: &Graph, params: &UbParams, rng: &mut R, lower: L, cancel: &CancelToken, mut emit: E) -> Solution
where
    R: Rng + ?Sized,
    L: Fn() -> usize,
    E: FnMut(usize, &TreeDecomposition),
{
    let mut run = UbRun::start(g, params.clone(), rng);
    emit(run.value(), &run.sol.best_td);
    while run.value() > lower() && !cancel.is_cancelled() {
        if run.step(g, rng, cancel) {
            emit(run.value(), &run.sol.best_td);
        }
    }
    run.sol
}
