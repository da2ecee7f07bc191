//! Bitset vertex sets, simple undirected graphs, contraction forests and minors.

use std::collections::BTreeSet;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

type Words = SmallVec<[u64; 2]>;

/// A subset of `0..n` stored as a fixed-width bit vector.
///
/// Iteration is always in ascending vertex order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet {
    words: Words,
}

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { words: SmallVec::from_elem(0, word_count(n)) }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::new(n);
        s.insert(v);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::new(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    /// Number of vertices this set can hold (rounded up to a word boundary).
    pub fn capacity(&self) -> usize {
        self.words.len() * 64
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / 64, v % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / 64, v % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        let w = v / 64;
        w < self.words.len() && self.words[w] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, o: &VertexSet) {
        debug_assert_eq!(self.words.len(), o.words.len());
        for (a, b) in self.words.iter_mut().zip(o.words.iter()) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, o: &VertexSet) {
        debug_assert_eq!(self.words.len(), o.words.len());
        for (a, b) in self.words.iter_mut().zip(o.words.iter()) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, o: &VertexSet) {
        debug_assert_eq!(self.words.len(), o.words.len());
        for (a, b) in self.words.iter_mut().zip(o.words.iter()) {
            *a &= !*b;
        }
    }

    pub fn union(&self, o: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.union_with(o);
        r
    }

    pub fn intersection(&self, o: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.intersect_with(o);
        r
    }

    pub fn difference(&self, o: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.difference_with(o);
        r
    }

    pub fn intersection_len(&self, o: &VertexSet) -> usize {
        self.words.iter().zip(o.words.iter()).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, o: &VertexSet) -> bool {
        self.words.iter().zip(o.words.iter()).all(|(a, b)| a & !b == 0)
            && self.words.iter().skip(o.words.len()).all(|&w| w == 0)
    }

    pub fn is_disjoint(&self, o: &VertexSet) -> bool {
        self.words.iter().zip(o.words.iter()).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, o: &VertexSet) -> bool {
        !self.is_disjoint(o)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("{0}-{1} is already an edge")]
    AlreadyAnEdge(usize, usize),
    #[error("edge {0}-{1} would close a cycle in the contraction forest")]
    ForestCycle(usize, usize),
}

/// Simple undirected graph on vertices `0..n` with bitset adjacency.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<VertexSet>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![VertexSet::new(n); n], m: 0 }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range endpoints.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.check_pair(u, v)?;
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.link(u, v);
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        if u >= n {
            return Err(GraphError::VertexOutOfRange(u, n));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v, n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn link(&mut self, u: usize, v: usize) {
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.m += 1;
        }
    }

    #[inline]
    pub(crate) fn unlink(&mut self, u: usize, v: usize) {
        if self.adj[u].remove(v) {
            self.adj[v].remove(u);
            self.m -= 1;
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn closed_neighbors(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    /// Open neighborhood of a set: vertices outside `s` adjacent to some member.
    pub fn set_neighbors(&self, s: &VertexSet) -> VertexSet {
        let mut r = self.empty_set();
        for v in s {
            r.union_with(&self.adj[v]);
        }
        r.difference_with(s);
        r
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| {
            let mut rest = s.clone();
            rest.remove(v);
            rest.is_subset(&self.adj[v])
        })
    }

    /// Number of non-adjacent pairs inside `s`.
    pub fn missing_pairs(&self, s: &VertexSet) -> usize {
        let k = s.len();
        let present: usize = s.iter().map(|v| self.adj[v].intersection_len(s)).sum::<usize>() / 2;
        k * (k.saturating_sub(1)) / 2 - present
    }

    /// The component of `G[within]` containing `start`.
    pub fn component_of(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut comp = VertexSet::singleton(self.n(), start);
        let mut frontier = comp.clone();
        while !frontier.is_empty() {
            let mut next = self.empty_set();
            for v in &frontier {
                next.union_with(&self.adj[v]);
            }
            next.intersect_with(within);
            next.difference_with(&comp);
            comp.union_with(&next);
            frontier = next;
        }
        comp
    }

    /// Connected components of `G[within]`, ordered by smallest vertex.
    pub fn components(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut rest = within.clone();
        let mut out = Vec::new();
        while let Some(v) = rest.first() {
            let c = self.component_of(v, &rest);
            rest.difference_with(&c);
            out.push(c);
        }
        out
    }

    /// Components of `G - s`.
    pub fn components_without(&self, s: &VertexSet) -> Vec<VertexSet> {
        self.components(&self.vertices().difference(s))
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0, &self.vertices()).len() == self.n()
    }

    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        match s.first() {
            None => false,
            Some(v) => self.component_of(v, s) == *s,
        }
    }

    /// Copy with `u-v` added. Fails if it already is an edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_pair(u, v)?;
        if self.has_edge(u, v) {
            return Err(GraphError::AlreadyAnEdge(u.min(v), u.max(v)));
        }
        let mut h = self.clone();
        h.link(u, v);
        Ok(h)
    }

    /// Copy with `s` turned into a clique.
    pub fn with_clique(&self, s: &VertexSet) -> Graph {
        let mut h = self.clone();
        h.make_clique(s);
        h
    }

    pub(crate) fn make_clique(&mut self, s: &VertexSet) {
        let vs = s.to_vec();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                self.link(u, v);
            }
        }
    }

    /// Non-adjacent distinct pairs `(u, v)` with `u < v`.
    pub fn fills(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |u| (u + 1..n).filter(move |&v| !self.has_edge(u, v)).map(move |v| (u, v)))
    }

    /// Induced subgraph on `s`, relabeled to `0..|s|` in ascending order.
    pub fn induced(&self, s: &VertexSet) -> InducedGraph {
        let original = s.to_vec();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in original.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(original.len());
        for (i, &v) in original.iter().enumerate() {
            for w in self.adj[v].intersection(s).iter() {
                if index[w] > i {
                    g.link(i, index[w]);
                }
            }
        }
        InducedGraph { graph: g, original }
    }

    /// Subset of vertices that lies on at least one edge.
    pub fn non_isolated(&self) -> VertexSet {
        VertexSet::from_iter(self.n(), (0..self.n()).filter(|&v| !self.adj[v].is_empty()))
    }

    /// Quotient graph whose vertices are the given disjoint groups; two groups are
    /// adjacent when some edge joins them.
    pub fn quotient(&self, groups: &[VertexSet]) -> Graph {
        let mut owner = vec![usize::MAX; self.n()];
        for (i, grp) in groups.iter().enumerate() {
            for v in grp {
                owner[v] = i;
            }
        }
        let mut h = Graph::new(groups.len());
        for (i, grp) in groups.iter().enumerate() {
            for w in self.set_neighbors(grp).iter() {
                let j = owner[w];
                if j != usize::MAX && j != i {
                    h.link(i, j);
                }
            }
        }
        h
    }

    /// Contracts every tree of `f`. See [`Minor`].
    pub fn contract(&self, f: &ContractionForest) -> Minor {
        let groups = f.classes();
        let mut vertex_of = vec![0; self.n()];
        for (i, grp) in groups.iter().enumerate() {
            for v in grp {
                vertex_of[v] = i;
            }
        }
        Minor { graph: self.quotient(&groups), vertex_of, groups }
    }
}

/// An induced (or realized) subgraph together with the host labels of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedGraph {
    pub graph: Graph,
    /// `original[i]` is the host vertex behind local vertex `i`.
    pub original: Vec<usize>,
}

impl InducedGraph {
    pub fn to_host(&self, s: &VertexSet, host_n: usize) -> VertexSet {
        VertexSet::from_iter(host_n, s.iter().map(|v| self.original[v]))
    }

    pub fn from_host(&self, s: &VertexSet) -> VertexSet {
        VertexSet::from_iter(
            self.graph.n(),
            self.original.iter().enumerate().filter(|(_, &v)| s.contains(v)).map(|(i, _)| i),
        )
    }
}

/// An acyclic set of edges of a host graph, each tree to be contracted to one vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContractionForest {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl ContractionForest {
    pub fn empty(n: usize) -> Self {
        ContractionForest { n, edges: BTreeSet::new() }
    }

    /// Validates that every pair is an edge of `g` and that the set is acyclic.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(g: &Graph, edges: I) -> Result<Self, GraphError> {
        let mut f = ContractionForest::empty(g.n());
        let mut dsu = Dsu::new(g.n());
        for (u, v) in edges {
            g.check_pair(u, v)?;
            if !g.has_edge(u, v) {
                return Err(GraphError::NotAnEdge(u.min(v), u.max(v)));
            }
            if f.edges.contains(&norm(u, v)) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            if !dsu.union(u, v) {
                return Err(GraphError::ForestCycle(u.min(v), u.max(v)));
            }
            f.edges.insert(norm(u, v));
        }
        Ok(f)
    }

    pub fn host_n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&norm(u, v))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    /// Adds an edge of `g`; fails if it is not an edge or would close a cycle.
    pub fn insert(&mut self, g: &Graph, u: usize, v: usize) -> Result<(), GraphError> {
        let mut edges = self.edge_vec();
        edges.push((u, v));
        *self = ContractionForest::from_edges(g, edges)?;
        Ok(())
    }

    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        self.edges.remove(&norm(u, v))
    }

    /// Forest minus the given edges (edges not present are ignored).
    pub fn without(&self, drop: &[(usize, usize)]) -> ContractionForest {
        let mut f = self.clone();
        for &(u, v) in drop {
            f.remove(u, v);
        }
        f
    }

    /// Representative (minor vertex index) of every host vertex.
    pub fn vertex_map(&self) -> Vec<usize> {
        let mut dsu = Dsu::new(self.n);
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        let mut id = vec![usize::MAX; self.n];
        let mut out = vec![0; self.n];
        let mut next = 0;
        for (v, o) in out.iter_mut().enumerate() {
            let r = dsu.find(v);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            *o = id[r];
        }
        out
    }

    /// The contraction classes, ordered by smallest member.
    pub fn classes(&self) -> Vec<VertexSet> {
        let map = self.vertex_map();
        let k = map.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![VertexSet::new(self.n); k];
        for (v, &c) in map.iter().enumerate() {
            out[c].insert(v);
        }
        out
    }
}

/// A contraction `G/F` with the bookkeeping to map vertices both ways.
#[derive(Clone, Debug)]
pub struct Minor {
    pub graph: Graph,
    /// Minor vertex of every host vertex.
    pub vertex_of: Vec<usize>,
    /// Host vertices behind every minor vertex.
    pub groups: Vec<VertexSet>,
}
