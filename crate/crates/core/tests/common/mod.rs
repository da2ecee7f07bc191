//! Brute-force reference implementations used only by tests. They work on
//! plain bitmask adjacency and share no code with the library algorithms.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;

use anytw::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Mask = u64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                e.push((u, v));
            }
        }
    }
    Graph::from_edges(n, e).unwrap()
}

pub fn random_connected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let g = random_graph(n, p, rng);
        if g.is_connected() {
            return g;
        }
    }
}

pub fn masks(g: &Graph) -> Vec<Mask> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0, |m, w| m | 1 << w)).collect()
}

pub fn to_set(n: usize, m: Mask) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|&v| m >> v & 1 == 1))
}

pub fn to_mask(s: &VertexSet) -> Mask {
    s.iter().fold(0, |m, v| m | 1 << v)
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n).with_clique(&VertexSet::full(n))
}

pub fn grid(r: usize, c: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..r {
        for j in 0..c {
            if j + 1 < c {
                e.push((i * c + j, i * c + j + 1));
            }
            if i + 1 < r {
                e.push((i * c + j, (i + 1) * c + j));
            }
        }
    }
    Graph::from_edges(r * c, e).unwrap()
}

pub fn petersen() -> Graph {
    let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    e.extend((0..5).map(|i| (i, i + 5)));
    e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
    Graph::from_edges(10, e).unwrap()
}

/// Components of the subgraph induced by `within`, by repeated frontier growth.
pub fn comps(adj: &[Mask], within: Mask) -> Vec<Mask> {
    let mut rest = within;
    let mut out = Vec::new();
    while rest != 0 {
        let mut c = rest & rest.wrapping_neg();
        loop {
            let mut grown = c;
            for v in 0..adj.len() {
                if c >> v & 1 == 1 {
                    grown |= adj[v] & within;
                }
            }
            if grown == c {
                break;
            }
            c = grown;
        }
        rest &= !c;
        out.push(c);
    }
    out
}

pub fn nbhd(adj: &[Mask], s: Mask) -> Mask {
    let mut r = 0;
    for v in 0..adj.len() {
        if s >> v & 1 == 1 {
            r |= adj[v];
        }
    }
    r & !s
}

/// Treewidth by the subset recurrence over elimination prefixes:
/// `TW(S) = min_{v ∈ S} max(TW(S - v), |Q(S - v, v)|)`.
pub fn brute_tw(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 22);
    if n == 0 {
        return 0;
    }
    let adj = masks(g);
    let full: usize = (1 << n) - 1;
    let q = |s: Mask, v: usize| -> u32 {
        let mut seen: Mask = 1 << v;
        let mut frontier: Mask = 1 << v;
        let mut out: Mask = 0;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                next |= adj[f.trailing_zeros() as usize];
                f &= f - 1;
            }
            next &= !seen;
            seen |= next;
            out |= next & !s;
            frontier = next & s;
        }
        out.count_ones()
    };
    let mut tw = vec![0u8; full + 1];
    for s in 1..=full {
        let mut best = u8::MAX;
        for v in 0..n {
            if s >> v & 1 == 1 {
                let rest = s & !(1 << v);
                let prev = if rest == 0 { 0 } else { tw[rest] };
                let val = prev.max(q(rest as Mask, v) as u8);
                best = best.min(val);
            }
        }
        tw[s] = best;
    }
    tw[full] as usize
}

/// All nonempty vertex subsets with at least two full components.
pub fn brute_min_seps(g: &Graph) -> HashSet<Mask> {
    let n = g.n();
    let adj = masks(g);
    let all: Mask = (1 << n) - 1;
    let mut out = HashSet::new();
    for s in 1..all {
        let full = comps(&adj, all & !s).into_iter().filter(|&c| nbhd(&adj, c) == s).count();
        if full >= 2 {
            out.insert(s);
        }
    }
    out
}

/// Chordality by repeatedly deleting simplicial vertices.
pub fn naive_chordal(adj: &[Mask]) -> bool {
    let n = adj.len();
    let mut alive: Mask = (1 << n) - 1;
    'outer: while alive != 0 {
        for v in 0..n {
            if alive >> v & 1 == 0 {
                continue;
            }
            let nb = adj[v] & alive;
            if (0..n).filter(|&w| nb >> w & 1 == 1).all(|w| nb & !(adj[w] | 1 << w) == 0) {
                alive &= !(1 << v);
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn is_clique_mask(adj: &[Mask], s: Mask) -> bool {
    (0..adj.len()).filter(|&v| s >> v & 1 == 1).all(|v| s & !(adj[v] | 1 << v) == 0)
}

pub fn brute_maximal_cliques(adj: &[Mask]) -> Vec<Mask> {
    let n = adj.len();
    let all: Mask = (1 << n) - 1;
    (1..=all)
        .filter(|&s| is_clique_mask(adj, s))
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 1 || !is_clique_mask(adj, s | 1 << v)))
        .collect()
}

/// Minimal triangulations as fill graphs of every elimination order that are
/// inclusion-minimal under single fill-edge removal.
pub fn brute_minimal_triangulations(g: &Graph) -> Vec<Vec<Mask>> {
    let n = g.n();
    let adj = masks(g);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<Mask>> = HashSet::new();
    let mut out = Vec::new();
    permute(&mut perm, 0, &mut |order| {
        let mut h = adj.clone();
        let mut alive: Mask = (1 << n) - 1;
        for &v in order {
            alive &= !(1 << v);
            let nb = h[v] & alive;
            for a in 0..n {
                if nb >> a & 1 == 1 {
                    h[a] |= nb & !(1 << a);
                }
            }
        }
        if !seen.insert(h.clone()) {
            return;
        }
        let minimal = (0..n).all(|u| {
            (u + 1..n).all(|v| {
                if h[u] >> v & 1 == 0 || adj[u] >> v & 1 == 1 {
                    return true;
                }
                let mut h2 = h.clone();
                h2[u] &= !(1 << v);
                h2[v] &= !(1 << u);
                !naive_chordal(&h2)
            })
        });
        if minimal {
            out.push(h);
        }
    });
    out
}

fn permute<F: FnMut(&[usize])>(a: &mut Vec<usize>, i: usize, f: &mut F) {
    if i == a.len() {
        f(a);
        return;
    }
    for j in i..a.len() {
        a.swap(i, j);
        permute(a, i + 1, f);
        a.swap(i, j);
    }
}

/// Potential maximal cliques as maximal cliques of minimal triangulations.
pub fn brute_pmcs(g: &Graph) -> HashSet<Mask> {
    brute_minimal_triangulations(g).iter().flat_map(|h| brute_maximal_cliques(h)).collect()
}

/// Contraction by repeated label merging. Returns (minor adjacency, label per vertex).
pub fn naive_contract(g: &Graph, forest: &[(usize, usize)]) -> (Vec<Mask>, Vec<usize>) {
    let n = g.n();
    let mut label: Vec<usize> = (0..n).collect();
    for &(u, v) in forest {
        let (a, b) = (label[u], label[v]);
        let (keep, drop) = (a.min(b), a.max(b));
        for l in label.iter_mut() {
            if *l == drop {
                *l = keep;
            }
        }
    }
    let mut reps: Vec<usize> = label.clone();
    reps.sort();
    reps.dedup();
    let idx = |l: usize| reps.iter().position(|&r| r == l).unwrap();
    let mapped: Vec<usize> = label.iter().map(|&l| idx(l)).collect();
    let mut adj = vec![0; reps.len()];
    for (u, v) in g.edges() {
        let (a, b) = (mapped[u], mapped[v]);
        if a != b {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    (adj, mapped)
}

/// Random spanning forest edges of `g`, each edge kept with probability `p`.
pub fn random_forest<R: Rng>(g: &Graph, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut label: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    use rand::seq::SliceRandom;
    edges.shuffle(rng);
    for (u, v) in edges {
        if label[u] != label[v] && rng.random_bool(p) {
            let (keep, drop) = (label[u].min(label[v]), label[u].max(label[v]));
            for l in label.iter_mut() {
                if *l == drop {
                    *l = keep;
                }
            }
            out.push((u, v));
        }
    }
    out
}
