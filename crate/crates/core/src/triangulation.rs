//! Chordality, elimination orderings, and minimal triangulations.

use rand::Rng;

use crate::graph::{Graph, VertexSet};
use crate::td::TreeDecomposition;

/// Maximum cardinality search order (first visited first).
pub fn mcs_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !done[v]).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).unwrap();
        done[v] = true;
        order.push(v);
        for w in g.neighbors(v) {
            if !done[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// True if every vertex's later neighbors in `order` form a clique.
pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for &v in order {
        let later: Vec<usize> = g.neighbors(v).iter().filter(|&w| pos[w] > pos[v]).collect();
        if let Some(&u) = later.iter().min_by_key(|&&w| pos[w]) {
            if later.iter().any(|&w| w != u && !g.has_edge(u, w)) {
                return false;
            }
        }
    }
    true
}

/// A perfect elimination order, if `g` is chordal.
pub fn perfect_elimination_order(g: &Graph) -> Option<Vec<usize>> {
    let mut order = mcs_order(g);
    order.reverse();
    is_perfect_elimination_order(g, &order).then_some(order)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_order(g).is_some()
}

/// Maximal cliques of a chordal graph; `None` if `g` is not chordal.
pub fn maximal_cliques(g: &Graph) -> Option<Vec<VertexSet>> {
    let order = perfect_elimination_order(g)?;
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let cands: Vec<VertexSet> = order
        .iter()
        .map(|&v| {
            let mut c = VertexSet::from_iter(g.n(), g.neighbors(v).iter().filter(|&w| pos[w] > pos[v]));
            c.insert(v);
            c
        })
        .collect();
    let mut out: Vec<VertexSet> = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        let dominated = cands.iter().enumerate().any(|(j, d)| j != i && c.is_subset(d) && (c != d || j < i));
        if !dominated {
            out.push(c.clone());
        }
    }
    out.sort();
    Some(out)
}

/// Graph obtained by playing the elimination game along `order`.
pub fn fill_graph(g: &Graph, order: &[usize]) -> Graph {
    let mut h = g.clone();
    let mut alive = g.vertices();
    for &v in order {
        alive.remove(v);
        let nb = h.neighbors(v).intersection(&alive);
        h.make_clique(&nb);
    }
    h
}

/// Tree decomposition from an elimination ordering: one bag per vertex, then
/// bags contained in a neighbor are merged away.
pub fn td_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(Vec::new(), Vec::new());
    }
    let h = fill_graph(g, order);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        let later = VertexSet::from_iter(n, h.neighbors(v).iter().filter(|&w| pos[w] > i));
        if let Some(p) = later.iter().min_by_key(|&w| pos[w]) {
            parent[i] = pos[p];
        }
        let mut bag = later;
        bag.insert(v);
        bags.push(bag);
    }
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, &p) in parent.iter().enumerate() {
        if p == usize::MAX {
            if let Some(r) = last_root {
                edges.push((r, i));
            }
            last_root = Some(i);
        } else {
            edges.push((i, p));
        }
    }
    TreeDecomposition::new(bags, edges).compressed()
}

/// Tree decomposition whose bags are the maximal cliques of a chordal graph.
pub fn clique_tree(h: &Graph) -> Option<TreeDecomposition> {
    let order = perfect_elimination_order(h)?;
    Some(td_from_order(h, &order))
}

/// Removes fill edges of `h` over `g` one at a time while the result stays
/// chordal. `h` must be a chordal supergraph of `g`.
///
/// Removing `u-v` from a chordal graph keeps it chordal exactly when the common
/// neighbors of `u` and `v` form a clique.
pub fn minimalize(g: &Graph, h: &Graph) -> Graph {
    let mut h = h.clone();
    let fill: Vec<(usize, usize)> = h.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
    loop {
        let mut changed = false;
        for &(u, v) in &fill {
            if !h.has_edge(u, v) {
                continue;
            }
            let common = h.neighbors(u).intersection(h.neighbors(v));
            if h.is_clique(&common) {
                h.unlink(u, v);
                changed = true;
            }
        }
        if !changed {
            return h;
        }
    }
}

/// A triangulation of a base graph.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub fill_edges: Vec<(usize, usize)>,
    pub chordal: Graph,
    pub cliques: Vec<VertexSet>,
}

impl Triangulation {
    pub fn from_chordal(g: &Graph, h: Graph) -> Self {
        let fill_edges = h.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
        let cliques = maximal_cliques(&h).expect("triangulation must be chordal");
        Triangulation { fill_edges, chordal: h, cliques }
    }

    pub fn width(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn tree_decomposition(&self) -> TreeDecomposition {
        clique_tree(&self.chordal).expect("triangulation must be chordal")
    }
}

/// Elimination game driven by a scoring rule; `pick` chooses among tied minima.
fn greedy_order<K: Ord, F, P>(g: &Graph, mut score: F, mut pick: P) -> Vec<usize>
where
    F: FnMut(usize, &VertexSet, &Graph) -> K,
    P: FnMut(&[usize]) -> usize,
{
    let n = g.n();
    let mut h = g.clone();
    let mut alive = g.vertices();
    let mut keys: Vec<Option<K>> = (0..n).map(|v| Some(score(v, h.neighbors(v), &h))).collect();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = alive.iter().map(|v| keys[v].as_ref().unwrap()).min().unwrap();
        let tied: Vec<usize> = alive.iter().filter(|&v| keys[v].as_ref().unwrap() == best).collect();
        let v = tied[pick(&tied)];
        order.push(v);
        alive.remove(v);
        let nb = h.neighbors(v).clone();
        h.make_clique(&nb);
        for w in &nb {
            h.unlink(v, w);
        }
        keys[v] = None;
        let mut touched = nb.clone();
        for w in &nb {
            touched.union_with(h.neighbors(w));
        }
        for w in &touched {
            keys[w] = Some(score(w, h.neighbors(w), &h));
        }
    }
    order
}

/// Average-fill key: fill/max(1, degree) compared exactly, then raw fill.
#[derive(PartialEq, Eq, Debug, Clone, Copy)]
struct AvgFill {
    fill: usize,
    deg: usize,
}

impl Ord for AvgFill {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.fill * o.deg.max(1)).cmp(&(o.fill * self.deg.max(1))).then(self.fill.cmp(&o.fill))
    }
}

impl PartialOrd for AvgFill {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Minimal triangulation by the min-average-fill elimination heuristic followed
/// by fill-edge removal. The rng only breaks ties.
pub fn mmaf<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Triangulation {
    let order = greedy_order(
        g,
        |_, nb, h| AvgFill { fill: h.missing_pairs(nb), deg: nb.len() },
        |tied| rng.random_range(0..tied.len()),
    );
    let h = minimalize(g, &fill_graph(g, &order));
    Triangulation::from_chordal(g, h)
}

/// Deterministic min-fill ordering, ties by degree then index.
pub fn min_fill_order(g: &Graph) -> Vec<usize> {
    greedy_order(g, |_, nb, h| (h.missing_pairs(nb), nb.len()), |_| 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn chordality() {
        assert!(!is_chordal(&cycle(4)));
        assert!(is_chordal(&cycle(3)));
        let mut g = cycle(4);
        g.link(0, 2);
        assert!(is_chordal(&g));
        assert_eq!(maximal_cliques(&g).unwrap().len(), 2);
    }

    #[test]
    fn mmaf_on_cycle_adds_n_minus_3_chords() {
        let g = cycle(7);
        let t = mmaf(&g, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(is_chordal(&t.chordal));
        assert_eq!(t.fill_edges.len(), 4);
        assert_eq!(t.width(), 2);
        t.tree_decomposition().validate(&g).unwrap();
    }

    #[test]
    fn mmaf_is_deterministic_per_seed() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let a = mmaf(&g, &mut ChaCha8Rng::seed_from_u64(7));
        let b = mmaf(&g, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a.fill_edges, b.fill_edges);
    }

    #[test]
    fn minimalize_removes_redundant_fill() {
        let g = cycle(4);
        let k4 = g.with_clique(&g.vertices());
        let h = minimalize(&g, &k4);
        assert_eq!(h.edge_count(), 5);
        assert!(is_chordal(&h));
    }
}
