//! Contraction-based lower bounds: keep a small minor `G/F` of known
//! treewidth `k` and lift it to minors of larger treewidth by adding fills,
//! uncontracting forest edges guided by safe separators, and re-contracting.

use std::collections::HashSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::cancel::{CancelToken, Cancelled};
use crate::certificate::MinorCertificate;
use crate::exact::{decide_tw_leq, exact_tw, ExactError, SIZE_CAP};
use crate::graph::{ContractionForest, Graph, Minor, VertexSet};
use crate::separators::{crosses, enumerate_min_seps, SafetyChecker};
use crate::td::TreeDecomposition;

pub type Edge = (usize, usize);

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum LiftError {
    /// Every forest edge was uncontracted without raising the width, so the
    /// current bound equals the treewidth.
    #[error("lower bound is exhausted: the current minor already has the graph's treewidth")]
    Exhausted,
    #[error("cancelled")]
    Cancelled,
    #[error("minor with {n} vertices exceeds the exact cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("graph has no fill")]
    NoFill,
}

impl From<ExactError> for LiftError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::Cancelled => LiftError::Cancelled,
            ExactError::SizeCapExceeded { n, cap } => LiftError::SizeCapExceeded { n, cap },
        }
    }
}

impl From<Cancelled> for LiftError {
    fn from(_: Cancelled) -> Self {
        LiftError::Cancelled
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbParams {
    pub unc_chunk: usize,
    pub n_try: usize,
    pub lb_base_size: usize,
    /// Lift recursion depth before falling back to unguided uncontraction.
    pub max_depth: usize,
}

impl Default for LbParams {
    fn default() -> Self {
        LbParams { unc_chunk: 5, n_try: 100, lb_base_size: 40, max_depth: 16 }
    }
}

/// Minor-min-width: repeatedly contract a minimum-degree vertex into the
/// neighbor sharing the fewest neighbors with it; the largest minimum degree
/// seen is a treewidth lower bound.
pub fn minor_min_width(g: &Graph) -> usize {
    let mut h = g.clone();
    let mut alive = g.vertices();
    let mut lb = 0;
    while alive.len() >= 2 {
        let v = alive.iter().min_by_key(|&v| (h.degree(v), v)).unwrap();
        let d = h.degree(v);
        if d == 0 {
            alive.remove(v);
            continue;
        }
        lb = lb.max(d);
        let nv = h.neighbors(v).clone();
        let u = nv.iter().min_by_key(|&u| (h.neighbors(u).intersection_len(&nv), h.degree(u), u)).unwrap();
        for w in &nv {
            h.unlink(v, w);
            if w != u {
                h.link(u, w);
            }
        }
        alive.remove(v);
    }
    lb
}

/// A minor `G/F` together with its exact treewidth.
#[derive(Clone, Debug)]
pub struct LbState {
    pub g: Graph,
    pub f: ContractionForest,
    pub minor: Minor,
    pub k: usize,
    pub witness_td: TreeDecomposition,
}

impl LbState {
    pub fn new(g: &Graph, f: ContractionForest, cancel: &CancelToken) -> Result<Self, LiftError> {
        let minor = g.contract(&f);
        let (k, witness_td) = exact_tw(&minor.graph, None, None, cancel)?;
        Ok(LbState { g: g.clone(), f, minor, k, witness_td })
    }

    /// The contraction classes as a certificate for `k`.
    pub fn certificate(&self) -> MinorCertificate {
        MinorCertificate { claimed_k: self.k, groups: self.minor.groups.clone() }
    }
}

/// Contracts min-degree minor vertices into their least-overlapping neighbor
/// until at most `lb_base_size` remain.
pub fn greedy_initial_contraction<R: Rng + ?Sized>(
    g: &Graph,
    params: &LbParams,
    rng: &mut R,
    cancel: &CancelToken,
) -> Result<LbState, LiftError> {
    let n = g.n();
    let mut h = g.clone();
    let mut alive = g.vertices();
    let mut group: Vec<VertexSet> = (0..n).map(|v| VertexSet::singleton(n, v)).collect();
    let mut forest = Vec::new();
    while alive.len() > params.lb_base_size {
        cancel.check()?;
        let dmin = alive.iter().map(|v| h.degree(v)).min().unwrap();
        let tied: Vec<usize> = alive.iter().filter(|&v| h.degree(v) == dmin).collect();
        let v = tied[rng.random_range(0..tied.len())];
        if dmin == 0 {
            break;
        }
        let nv = h.neighbors(v).clone();
        let u = nv.iter().min_by_key(|&u| (h.neighbors(u).intersection_len(&nv), u)).unwrap();
        let (x, y) = group[v]
            .iter()
            .find_map(|x| g.neighbors(x).intersection(&group[u]).first().map(|y| (x, y)))
            .expect("adjacent minor vertices share a host edge");
        forest.push((x, y));
        for w in &nv {
            h.unlink(v, w);
            if w != u {
                h.link(u, w);
            }
        }
        let gv = std::mem::replace(&mut group[v], VertexSet::new(n));
        group[u].union_with(&gv);
        alive.remove(v);
    }
    let f = ContractionForest::from_edges(g, forest).expect("greedy contraction builds a forest");
    LbState::new(g, f, cancel)
}

/// Degree in `G/F` of the minor vertex containing `v`.
pub fn d_f(g: &Graph, f: &ContractionForest, v: usize) -> usize {
    let m = g.contract(f);
    m.graph.degree(m.vertex_of[v])
}

/// Fill `(u, v)` of `g` whose endpoints lie in distinct non-adjacent minor
/// vertices, maximizing `(min d_F, max d_F)` lexicographically; ties go to
/// the smallest endpoints.
pub fn choose_fill(g: &Graph, f: &ContractionForest) -> Result<Edge, LiftError> {
    choose_fill_in(g, &g.contract(f))
}

fn choose_fill_in(g: &Graph, m: &Minor) -> Result<Edge, LiftError> {
    let mut best: Option<((usize, usize), Edge)> = None;
    for (u, v) in g.fills() {
        let (mu, mv) = (m.vertex_of[u], m.vertex_of[v]);
        if mu == mv || m.graph.has_edge(mu, mv) {
            continue;
        }
        let (du, dv) = (m.graph.degree(mu), m.graph.degree(mv));
        let key = (du.min(dv), du.max(dv));
        if best.is_none_or(|(bk, _)| key > bk) {
            best = Some((key, (u, v)));
        }
    }
    best.map(|(_, e)| e).ok_or(LiftError::NoFill)
}

/// Whether adding the fill `e` raises the treewidth of the contraction.
pub fn is_critical(g: &Graph, f: &ContractionForest, e: Edge, cancel: &CancelToken) -> Result<bool, ExactError> {
    let (k, _) = exact_tw(&g.contract(f).graph, None, None, cancel)?;
    let ge = g.with_edge(e.0, e.1).expect("e must be a fill");
    Ok(decide_tw_leq(&ge.contract(f).graph, k, cancel)?.is_none())
}

/// `G/(F - A)` with the cap enforced.
fn uncontracted(g: &Graph, f: &ContractionForest, a: &[Edge]) -> Result<Minor, LiftError> {
    let m = g.contract(&f.without(a));
    if m.graph.n() > SIZE_CAP {
        return Err(LiftError::SizeCapExceeded { n: m.graph.n(), cap: SIZE_CAP });
    }
    Ok(m)
}

/// Ranking used by uncontraction: 0 when `H_A` is lifted, otherwise one more
/// than the number of counted separators. Counting stops at `limit`.
#[allow(clippy::too_many_arguments)]
fn ncs_rank(
    g: &Graph,
    f: &ContractionForest,
    a: &[Edge],
    e: Option<Edge>,
    k: usize,
    limit: usize,
    checker: &mut SafetyChecker,
    cancel: &CancelToken,
) -> Result<usize, LiftError> {
    let h = uncontracted(g, f, a)?;
    if decide_tw_leq(&h.graph, k, cancel)?.is_none() {
        return Ok(0);
    }
    let mut count = 1;
    for s in enumerate_min_seps(&h.graph, k, cancel)? {
        if count >= limit {
            break;
        }
        if let Some((u, v)) = e {
            if !crosses(&h.graph, &s, h.vertex_of[u], h.vertex_of[v]) {
                continue;
            }
        }
        if checker.is_safe(&h.graph, &s, k, cancel)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of minimal separators of `H_A = G/(F - A)` of size at most `k`
/// that are safe for width `k` and separate the endpoints of `e`; 0 when
/// `H_A` is lifted (treewidth above `k`).
pub fn ncs(g: &Graph, f: &ContractionForest, a: &[Edge], e: Edge, k: usize, cancel: &CancelToken) -> Result<usize, LiftError> {
    let r = ncs_rank(g, f, a, Some(e), k, usize::MAX, &mut SafetyChecker::new(), cancel)?;
    Ok(r.saturating_sub(1))
}

/// Grows an uncontraction set `A ⊆ F` in chunks, each time keeping the random
/// superset with the fewest crossing safe separators, until `G/(F - A)` has
/// treewidth above `k`. With `e = None` all safe separators count.
#[allow(clippy::too_many_arguments)]
pub fn break_fill<R: Rng + ?Sized>(
    g: &Graph,
    f: &ContractionForest,
    e: Option<Edge>,
    k: usize,
    params: &LbParams,
    rng: &mut R,
    checker: &mut SafetyChecker,
    cancel: &CancelToken,
) -> Result<Vec<Edge>, LiftError> {
    let fe = f.edge_vec();
    let mut a: Vec<Edge> = Vec::new();
    loop {
        cancel.check()?;
        let h = uncontracted(g, f, &a)?;
        if decide_tw_leq(&h.graph, k, cancel)?.is_none() {
            return Ok(a);
        }
        if a.len() == fe.len() {
            return Err(LiftError::Exhausted);
        }
        let rest: Vec<Edge> = fe.iter().copied().filter(|x| !a.contains(x)).collect();
        let need = params.unc_chunk.min(rest.len());
        let mut samples: Vec<Vec<Edge>> = Vec::new();
        let mut seen: HashSet<Vec<Edge>> = HashSet::new();
        for _ in 0..params.n_try {
            let mut pick: Vec<Edge> = rest.choose_multiple(rng, need).copied().collect();
            pick.sort();
            if seen.insert(pick.clone()) {
                samples.push(pick);
            }
            if need == rest.len() {
                break;
            }
        }
        let mut best: Option<(usize, Vec<Edge>)> = None;
        for pick in samples {
            let mut cand = a.clone();
            cand.extend(pick);
            let limit = best.as_ref().map_or(usize::MAX, |(r, _)| *r);
            let r = ncs_rank(g, f, &cand, e, k, limit, checker, cancel)?;
            if best.as_ref().is_none_or(|(br, _)| r < *br) {
                let lifted = r == 0;
                best = Some((r, cand));
                if lifted {
                    break;
                }
            }
        }
        a = best.expect("at least one sample").1;
    }
}

/// Adds host edges of `edges_of` to `f` in random order whenever the
/// contraction keeps treewidth at least `k2` (measured on `tw_of`). Failed
/// merges are not retried: contracting more can only lower the width.
pub fn extend_to_maximal_in<R: Rng + ?Sized>(
    edges_of: &Graph,
    tw_of: &Graph,
    f: &ContractionForest,
    k2: usize,
    rng: &mut R,
    cancel: &CancelToken,
) -> ContractionForest {
    let mut f = f.clone();
    let mut edges: Vec<Edge> = edges_of.edges().collect();
    edges.shuffle(rng);
    let mut map = f.vertex_map();
    for (u, v) in edges {
        if cancel.is_cancelled() {
            break;
        }
        if map[u] == map[v] {
            continue;
        }
        let mut trial = f.clone();
        if trial.insert(edges_of, u, v).is_err() {
            continue;
        }
        let keeps = k2 == 0
            || match decide_tw_leq(&tw_of.contract(&trial).graph, k2 - 1, cancel) {
                Ok(r) => r.is_none(),
                Err(_) => false,
            };
        if keeps {
            f = trial;
            map = f.vertex_map();
        }
    }
    f
}

/// Maximal forest containing `f2` whose contraction still has treewidth `k2`.
pub fn extend_to_maximal<R: Rng + ?Sized>(
    g: &Graph,
    f2: &ContractionForest,
    k2: usize,
    rng: &mut R,
    cancel: &CancelToken,
) -> ContractionForest {
    extend_to_maximal_in(g, g, f2, k2, rng, cancel)
}

struct LiftCtx<'a, R: Rng + ?Sized> {
    base: &'a Graph,
    params: &'a LbParams,
    rng: &'a mut R,
    checker: &'a mut SafetyChecker,
    cancel: &'a CancelToken,
}

impl<R: Rng + ?Sized> LiftCtx<'_, R> {
    /// Precondition: `tw(cur/f) = k`. Returns a forest of base edges with
    /// `tw(cur/F') > k`.
    fn lift(&mut self, cur: &Graph, f: &ContractionForest, k: usize, depth: usize) -> Result<ContractionForest, LiftError> {
        self.cancel.check()?;
        let minor = cur.contract(f);
        let (f1, guide) = match choose_fill_in(cur, &minor) {
            Err(_) => (f.clone(), None),
            Ok(e) => {
                let cur_e = cur.with_edge(e.0, e.1).expect("fill");
                let critical = decide_tw_leq(&cur_e.contract(f).graph, k, self.cancel)?.is_none();
                if critical {
                    (f.clone(), Some(e))
                } else if depth >= self.params.max_depth {
                    (f.clone(), None)
                } else {
                    let f1 = self.lift(&cur_e, f, k, depth + 1)?;
                    if decide_tw_leq(&cur.contract(&f1).graph, k, self.cancel)?.is_none() {
                        return Ok(f1);
                    }
                    (f1, Some(e))
                }
            }
        };
        let a = break_fill(cur, &f1, guide, k, self.params, self.rng, self.checker, self.cancel)?;
        let f2 = f1.without(&a);
        let (k2, _) = exact_tw(&cur.contract(&f2).graph, Some(k + 1), None, self.cancel)?;
        let f3 = extend_to_maximal_in(self.base, cur, &f2, k2, self.rng, self.cancel);
        self.cancel.check()?;
        Ok(f3)
    }
}

/// A forest `F'` with `tw(G/F') > tw(G/F)`, or `Exhausted` when
/// `tw(G/F) = tw(G)`.
pub fn lift<R: Rng + ?Sized>(
    g: &Graph,
    f: &ContractionForest,
    params: &LbParams,
    rng: &mut R,
    checker: &mut SafetyChecker,
    cancel: &CancelToken,
) -> Result<ContractionForest, LiftError> {
    let m = g.contract(f);
    if m.graph.n() > SIZE_CAP {
        return Err(LiftError::SizeCapExceeded { n: m.graph.n(), cap: SIZE_CAP });
    }
    let (k, _) = exact_tw(&m.graph, None, None, cancel)?;
    let mut ctx = LiftCtx { base: g, params, rng, checker, cancel };
    ctx.lift(g, f, k, 0)
}

/// Why a lower-bound run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbStop {
    /// The current bound is the treewidth of the graph.
    Exhausted,
    ReachedUpper,
    Cancelled,
    Failed(LiftError),
}

/// Resumable lower-bound iteration: one [`LbRun::step`] is one lift.
pub struct LbRun {
    pub state: LbState,
    params: LbParams,
    checker: SafetyChecker,
    pub stopped: Option<LbStop>,
    /// Optimal decomposition of the whole graph, known when the initial
    /// contraction was empty.
    pub exact_td: Option<TreeDecomposition>,
}

impl LbRun {
    /// Greedy contraction to the base size, then maximal extension so the
    /// first certificate is already small.
    pub fn start<R: Rng + ?Sized>(g: &Graph, params: LbParams, rng: &mut R, cancel: &CancelToken) -> Result<Self, LiftError> {
        let init = greedy_initial_contraction(g, &params, rng, cancel)?;
        let exact_td = init.f.is_empty().then(|| init.witness_td.clone());
        let f = extend_to_maximal(g, &init.f, init.k, rng, cancel);
        let state = if f == init.f { init } else { LbState::new(g, f, cancel)? };
        Ok(LbRun { state, params, checker: SafetyChecker::new(), stopped: None, exact_td })
    }

    pub fn k(&self) -> usize {
        self.state.k
    }

    pub fn certificate(&self) -> MinorCertificate {
        self.state.certificate()
    }

    /// One lift. Returns true when the bound increased.
    pub fn step<R: Rng + ?Sized>(&mut self, upper: usize, rng: &mut R, cancel: &CancelToken) -> bool {
        if self.stopped.is_some() {
            return false;
        }
        if self.state.k >= upper {
            self.stopped = Some(LbStop::ReachedUpper);
            return false;
        }
        if self.checker.queries > 200_000 {
            self.checker = SafetyChecker::new();
        }
        let g = self.state.g.clone();
        match lift(&g, &self.state.f, &self.params, rng, &mut self.checker, cancel) {
            Ok(f) => match LbState::new(&g, f, cancel) {
                Ok(next) if next.k > self.state.k => {
                    self.state = next;
                    true
                }
                Ok(_) => {
                    self.stopped = Some(LbStop::Failed(LiftError::NoFill));
                    false
                }
                Err(e) => {
                    self.stopped = Some(stop_of(e));
                    false
                }
            },
            Err(e) => {
                self.stopped = Some(stop_of(e));
                false
            }
        }
    }
}

fn stop_of(e: LiftError) -> LbStop {
    match e {
        LiftError::Exhausted => LbStop::Exhausted,
        LiftError::Cancelled => LbStop::Cancelled,
        other => LbStop::Failed(other),
    }
}

/// Runs lifts until the bound meets `upper()`, exhaustion, or cancellation,
/// calling `emit` for the initial bound and every improvement.
pub fn lb_main_loop<R, U, E>(
    g: &Graph,
    params: &LbParams,
    rng: &mut R,
    upper: U,
    cancel: &CancelToken,
    mut emit: E,
) -> LbStop
where
    R: Rng + ?Sized,
    U: Fn() -> usize,
    E: FnMut(usize, MinorCertificate),
{
    let mut run = match LbRun::start(g, params.clone(), rng, cancel) {
        Ok(r) => r,
        Err(e) => return stop_of(e),
    };
    emit(run.k(), run.certificate());
    loop {
        if run.step(upper(), rng, cancel) {
            emit(run.k(), run.certificate());
        }
        if let Some(s) = run.stopped {
            return s;
        }
    }
}
