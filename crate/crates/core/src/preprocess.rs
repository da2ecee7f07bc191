//! Almost-clique separator decomposition: split the graph at almost-clique
//! minimal separators so treewidth is the maximum over the completed parts.

use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, InducedGraph, VertexSet};
use crate::separators::{almost_clique_apex, is_almost_clique, is_minimal_separator};
use crate::td::{TdViolation, TreeDecomposition};
use crate::triangulation::mmaf;

#[derive(Clone, Debug)]
pub struct AcsDecomposition {
    /// Decomposition of the input graph whose bags are the parts.
    pub td: TreeDecomposition,
    /// Part graphs: each bag with the neighborhoods of outside components completed.
    pub parts: Vec<InducedGraph>,
    /// For each part, the connected set of input vertices behind each part vertex.
    pub part_origin: Vec<Vec<VertexSet>>,
    /// Vertex count of the input graph.
    pub n: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreprocessError {
    #[error("decomposition of part {part} is invalid: {violation}")]
    InvalidPartTd { part: usize, violation: TdViolation },
    #[error("expected {expected} part decompositions, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("separator between parts {0} and {1} is not inside a single bag")]
    SeparatorNotInBag(usize, usize),
}

/// `G[bag]` plus a clique on `N(C)` for every component `C` of `G - bag`.
pub fn realize_part(g: &Graph, bag: &VertexSet) -> InducedGraph {
    let h = completed_on(g, bag);
    h.induced(bag)
}

/// Same as [`realize_part`] but kept on the host vertex labels.
fn completed_on(g: &Graph, bag: &VertexSet) -> Graph {
    let mut h = Graph::new(g.n());
    for v in bag {
        for w in g.neighbors(v).intersection(bag).iter().filter(|&w| w > v) {
            h.link(v, w);
        }
    }
    for c in g.components_without(bag) {
        h.make_clique(&g.set_neighbors(&c));
    }
    h
}

impl AcsDecomposition {
    pub fn trivial(g: &Graph) -> Self {
        let all = g.vertices();
        let origin = (0..g.n()).map(|v| VertexSet::singleton(g.n(), v)).collect();
        AcsDecomposition { td: TreeDecomposition::new(vec![all.clone()], Vec::new()), parts: vec![g.induced(&all)], part_origin: vec![origin], n: g.n() }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Index of the part with the most vertices (lowest index on ties).
    pub fn largest_part(&self) -> usize {
        (0..self.parts.len()).max_by_key(|&i| (self.parts[i].graph.n(), std::cmp::Reverse(i))).unwrap_or(0)
    }

    /// Maps a set of part vertices to the union of their origins in the input graph.
    pub fn lift_group(&self, part: usize, local: &VertexSet, host_n: usize) -> VertexSet {
        let mut out = VertexSet::new(host_n);
        for v in local {
            out.union_with(&self.part_origin[part][v]);
        }
        out
    }
}

/// Splits `g` at almost-clique minimal separators taken from a minimal
/// triangulation. Components are split apart first. Falls back to the trivial
/// single-part decomposition if any consistency check fails.
pub fn decompose<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> AcsDecomposition {
    if g.n() == 0 {
        return AcsDecomposition::trivial(g);
    }
    let mut parts = Vec::new();
    for comp in g.components(&g.vertices()) {
        let sub = g.induced(&comp);
        let local = decompose_connected(&sub.graph, rng);
        parts.push(local.relabel(&sub.original, g.n()));
    }
    let td = TreeDecomposition::join(parts);
    finish(g, td).unwrap_or_else(|| AcsDecomposition::trivial(g))
}

fn decompose_connected<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> TreeDecomposition {
    let t = mmaf(g, rng);
    let clique_tree = t.tree_decomposition();
    let mut cands: Vec<VertexSet> = Vec::new();
    for &(a, b) in &clique_tree.edges {
        let s = clique_tree.bags[a].intersection(&clique_tree.bags[b]);
        if !cands.contains(&s) && is_almost_clique(g, &s) && is_minimal_separator(g, &s) {
            cands.push(s);
        }
    }
    let (bags, edges) = split(g, &g.vertices(), &cands);
    TreeDecomposition::new(bags, edges)
}

/// Recursively splits `atom`; returns bags and tree edges over them.
fn split(g: &Graph, atom: &VertexSet, cands: &[VertexSet]) -> (Vec<VertexSet>, Vec<(usize, usize)>) {
    let r = completed_on(g, atom);
    let mut best: Option<(usize, &VertexSet, Vec<VertexSet>, Vec<VertexSet>)> = None;
    for s in cands.iter().filter(|s| s.is_subset(atom)) {
        let comps = r.components(&atom.difference(s));
        if comps.len() < 2 {
            continue;
        }
        let seps: Vec<VertexSet> = comps.iter().map(|c| r.set_neighbors(c)).collect();
        if seps.iter().filter(|x| *x == s).count() < 2 {
            continue;
        }
        if !seps.iter().all(|x| is_minimal_separator(g, x) && is_almost_clique(g, x)) {
            continue;
        }
        let largest = comps.iter().zip(&seps).map(|(c, x)| c.len() + x.len()).max().unwrap();
        if best.as_ref().is_none_or(|(l, ..)| largest < *l) {
            best = Some((largest, s, comps, seps));
        }
    }
    let Some((_, chosen, comps, seps)) = best else {
        return (vec![atom.clone()], Vec::new());
    };
    let pieces: Vec<VertexSet> = comps.iter().zip(&seps).map(|(c, x)| c.union(x)).collect();
    let hub = seps.iter().position(|x| x == chosen).unwrap();
    let sub_cands = |p: &VertexSet| -> Vec<VertexSet> { cands.iter().filter(|s| s.is_subset(p)).cloned().collect() };
    let (mut bags, mut edges) = split(g, &pieces[hub], &sub_cands(&pieces[hub]));
    let hub_len = bags.len();
    for (j, piece) in pieces.iter().enumerate() {
        if j == hub {
            continue;
        }
        let (pb, pe) = split(g, piece, &sub_cands(piece));
        let Some(a) = (0..hub_len).find(|&i| seps[j].is_subset(&bags[i])) else {
            return (vec![atom.clone()], Vec::new());
        };
        let Some(b) = pb.iter().position(|bag| seps[j].is_subset(bag)) else {
            return (vec![atom.clone()], Vec::new());
        };
        let off = bags.len();
        edges.push((a, off + b));
        edges.extend(pe.iter().map(|&(x, y)| (x + off, y + off)));
        bags.extend(pb);
    }
    (bags, edges)
}

/// Builds parts and origins and checks every structural requirement.
fn finish(g: &Graph, td: TreeDecomposition) -> Option<AcsDecomposition> {
    td.validate(g).ok()?;
    let connected = g.is_connected();
    let mut parts = Vec::with_capacity(td.bags.len());
    let mut origins = Vec::with_capacity(td.bags.len());
    for bag in &td.bags {
        let part = realize_part(g, bag);
        let mut origin: Vec<VertexSet> = part.original.iter().map(|&v| VertexSet::singleton(g.n(), v)).collect();
        for c in g.components_without(bag) {
            let nc = g.set_neighbors(&c);
            match almost_clique_apex(g, &nc)? {
                None => {}
                Some(apex) => {
                    let local = part.original.iter().position(|&v| v == apex)?;
                    origin[local].union_with(&c);
                }
            }
        }
        for o in &origin {
            if !g.is_connected_set(o) {
                return None;
            }
        }
        for (a, b) in part.graph.edges() {
            if !g.set_neighbors(&origin[a]).intersects(&origin[b]) {
                return None;
            }
        }
        parts.push(part);
        origins.push(origin);
    }
    for &(i, j) in &td.edges {
        let s = td.bags[i].intersection(&td.bags[j]);
        let ok_sep = if s.is_empty() { !connected } else { is_minimal_separator(g, &s) };
        if !ok_sep || !is_almost_clique(g, &s) {
            return None;
        }
        if [i, j].iter().any(|&p| !parts[p].graph.is_clique(&parts[p].from_host(&s))) {
            return None;
        }
    }
    Some(AcsDecomposition { td, parts, part_origin: origins, n: g.n() })
}

/// Glues decompositions of the parts along the decomposition tree.
pub fn recombine(dec: &AcsDecomposition, part_tds: &[TreeDecomposition]) -> Result<TreeDecomposition, PreprocessError> {
    if part_tds.len() != dec.parts.len() {
        return Err(PreprocessError::PartCount { expected: dec.parts.len(), got: part_tds.len() });
    }
    let host_n = dec.n;
    let mut bags: Vec<VertexSet> = Vec::new();
    let mut edges = Vec::new();
    let mut offset = Vec::with_capacity(part_tds.len());
    for (i, (td, part)) in part_tds.iter().zip(&dec.parts).enumerate() {
        td.validate(&part.graph).map_err(|violation| PreprocessError::InvalidPartTd { part: i, violation })?;
        offset.push(bags.len());
        let mapped = td.relabel(&part.original, host_n);
        edges.extend(mapped.edges.iter().map(|&(a, b)| (a + bags.len(), b + bags.len())));
        bags.extend(mapped.bags);
    }
    let range = |i: usize| offset[i]..offset[i] + part_tds[i].bags.len();
    for &(i, j) in &dec.td.edges {
        let s = dec.td.bags[i].intersection(&dec.td.bags[j]);
        let a = range(i).find(|&x| s.is_subset(&bags[x])).ok_or(PreprocessError::SeparatorNotInBag(i, j))?;
        let b = range(j).find(|&x| s.is_subset(&bags[x])).ok_or(PreprocessError::SeparatorNotInBag(i, j))?;
        edges.push((a, b));
    }
    Ok(TreeDecomposition::new(bags, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_tw;
    use crate::CancelToken;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> Graph {
        Graph::new(n).with_clique(&VertexSet::full(n))
    }

    fn glue_k5s(shared: usize) -> Graph {
        let n = 10 - shared;
        let mut g = Graph::new(n);
        g.make_clique(&VertexSet::from_iter(n, 0..5));
        g.make_clique(&VertexSet::from_iter(n, 5 - shared..n));
        g
    }

    fn solve_parts(d: &AcsDecomposition) -> Vec<TreeDecomposition> {
        d.parts.iter().map(|p| exact_tw(&p.graph, None, None, &CancelToken::new()).unwrap().1).collect()
    }

    #[test]
    fn clique_is_one_part() {
        let g = complete(6);
        let d = decompose(&g, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(d.len(), 1);
        assert_eq!(d.parts[0].graph, g);
    }

    #[test]
    fn cut_vertex_splits() {
        let g = glue_k5s(1);
        let d = decompose(&g, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(d.len(), 2);
        let first = realize_part(&g, &VertexSet::from_iter(9, 0..5));
        assert_eq!(first.graph, complete(5));
        let td = recombine(&d, &solve_parts(&d)).unwrap();
        td.validate(&g).unwrap();
        assert_eq!(td.width, 4);
    }

    #[test]
    fn almost_clique_five_set_splits() {
        // Two K_6 sharing a 5-set S, then one edge inside S removed: S is an almost-clique.
        let n = 7;
        let mut g = Graph::new(n);
        g.make_clique(&VertexSet::from_iter(n, 0..6));
        g.make_clique(&VertexSet::from_iter(n, 1..7));
        g.unlink(1, 2);
        let d = decompose(&g, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(d.len(), 2);
        let s = d.td.bags[0].intersection(&d.td.bags[1]);
        assert_eq!(s, VertexSet::from_iter(n, 1..6));
        let td = recombine(&d, &solve_parts(&d)).unwrap();
        td.validate(&g).unwrap();
        assert_eq!(td.width, exact_tw(&g, None, None, &CancelToken::new()).unwrap().0);
    }

    #[test]
    fn path_part_realization() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p = realize_part(&g, &VertexSet::from_iter(3, [0, 1]));
        assert_eq!(p.graph.edge_count(), 1);
        let d = decompose(&g, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn rejects_bad_part_td() {
        let g = glue_k5s(1);
        let d = decompose(&g, &mut ChaCha8Rng::seed_from_u64(1));
        let mut tds = solve_parts(&d);
        tds[0] = TreeDecomposition::new(vec![VertexSet::new(5)], vec![]);
        assert!(matches!(recombine(&d, &tds), Err(PreprocessError::InvalidPartTd { part: 0, .. })));
    }
}
