//! Tree decompositions and their validation.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    /// Tree edges between bag indices.
    pub edges: Vec<(usize, usize)>,
    /// Declared width; [`TreeDecomposition::new`] sets it to max bag size - 1.
    pub width: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdViolation {
    #[error("bag {0} mentions vertex {1} outside the graph")]
    VertexOutOfRange(usize, usize),
    #[error("tree edge {0}-{1} refers to a missing bag or is a loop")]
    BadTreeEdge(usize, usize),
    #[error("bag graph is not a tree")]
    NotATree,
    #[error("vertex {0} is in no bag")]
    VertexUncovered(usize),
    #[error("edge {0}-{1} is in no bag")]
    EdgeUncovered(usize, usize),
    #[error("bags containing vertex {0} are not connected")]
    Disconnected(usize),
    #[error("declared width {declared} but largest bag gives {actual}")]
    WidthMismatch { declared: usize, actual: usize },
}

fn width_of(bags: &[VertexSet]) -> usize {
    bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
}

impl TreeDecomposition {
    pub fn new(bags: Vec<VertexSet>, edges: Vec<(usize, usize)>) -> Self {
        let width = width_of(&bags);
        TreeDecomposition { bags, edges, width }
    }

    /// One bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        Self::new(vec![VertexSet::full(n)], Vec::new())
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks vertex and edge coverage, the tree shape, connectivity of every
    /// vertex's bags, and the declared width.
    pub fn validate(&self, g: &Graph) -> Result<(), TdViolation> {
        let n = g.n();
        let nb = self.bags.len();
        for (i, b) in self.bags.iter().enumerate() {
            if let Some(v) = b.iter().find(|&v| v >= n) {
                return Err(TdViolation::VertexOutOfRange(i, v));
            }
        }
        for &(a, b) in &self.edges {
            if a >= nb || b >= nb || a == b {
                return Err(TdViolation::BadTreeEdge(a, b));
            }
        }
        if nb > 0 {
            if self.edges.len() != nb - 1 {
                return Err(TdViolation::NotATree);
            }
            let adj = self.adjacency();
            let mut seen = vec![false; nb];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if seen.iter().any(|&s| !s) {
                return Err(TdViolation::NotATree);
            }
        }
        let mut covered = VertexSet::new(n);
        for b in &self.bags {
            covered.union_with(b);
        }
        if let Some(v) = (0..n).find(|&v| !covered.contains(v)) {
            return Err(TdViolation::VertexUncovered(v));
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
                return Err(TdViolation::EdgeUncovered(u, v));
            }
        }
        let adj = self.adjacency();
        for v in 0..n {
            let holders: Vec<usize> = (0..nb).filter(|&i| self.bags[i].contains(v)).collect();
            let mut seen = vec![false; nb];
            let mut stack = vec![holders[0]];
            seen[holders[0]] = true;
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] && self.bags[y].contains(v) {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != holders.len() {
                return Err(TdViolation::Disconnected(v));
            }
        }
        let actual = width_of(&self.bags);
        if actual != self.width {
            return Err(TdViolation::WidthMismatch { declared: self.width, actual });
        }
        Ok(())
    }

    /// Merges every bag into a tree neighbor that contains it.
    pub fn compressed(&self) -> TreeDecomposition {
        let nb = self.bags.len();
        let mut adj: Vec<Vec<usize>> = self.adjacency();
        let mut alive = vec![true; nb];
        let bags = &self.bags;
        loop {
            let mut merged = false;
            for a in 0..nb {
                if !alive[a] {
                    continue;
                }
                let target = adj[a].iter().copied().find(|&b| bags[a].is_subset(&bags[b]));
                if let Some(b) = target {
                    let na = std::mem::take(&mut adj[a]);
                    for &c in &na {
                        adj[c].retain(|&x| x != a);
                        if c != b && !adj[b].contains(&c) {
                            adj[b].push(c);
                            adj[c].push(b);
                        }
                    }
                    alive[a] = false;
                    merged = true;
                }
            }
            if !merged {
                break;
            }
        }
        let mut index = vec![usize::MAX; nb];
        let mut out_bags = Vec::new();
        for i in 0..nb {
            if alive[i] {
                index[i] = out_bags.len();
                out_bags.push(bags[i].clone());
            }
        }
        let mut edges = Vec::new();
        for a in 0..nb {
            if alive[a] {
                for &b in &adj[a] {
                    if a < b {
                        edges.push((index[a], index[b]));
                    }
                }
            }
        }
        TreeDecomposition::new(out_bags, edges)
    }

    /// Maps bags through `original` into a host graph on `host_n` vertices.
    pub fn relabel(&self, original: &[usize], host_n: usize) -> TreeDecomposition {
        let bags = self.bags.iter().map(|b| VertexSet::from_iter(host_n, b.iter().map(|v| original[v]))).collect();
        TreeDecomposition::new(bags, self.edges.clone())
    }

    /// Disjoint union of decompositions over the same host, linked into one tree.
    pub fn join(parts: Vec<TreeDecomposition>) -> TreeDecomposition {
        let mut bags = Vec::new();
        let mut edges = Vec::new();
        for p in parts {
            if p.bags.is_empty() {
                continue;
            }
            let off = bags.len();
            if off > 0 {
                edges.push((0, off));
            }
            edges.extend(p.edges.iter().map(|&(a, b)| (a + off, b + off)));
            bags.extend(p.bags);
        }
        TreeDecomposition::new(bags, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, v.iter().copied())
    }

    #[test]
    fn validates_path_decomposition() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let td = TreeDecomposition::new(vec![set(4, &[0, 1]), set(4, &[1, 2]), set(4, &[2, 3])], vec![(0, 1), (1, 2)]);
        assert_eq!(td.validate(&g), Ok(()));
        assert_eq!(td.width, 1);
    }

    #[test]
    fn detects_violations() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let missing_edge = TreeDecomposition::new(vec![set(3, &[0, 1]), set(3, &[2])], vec![(0, 1)]);
        assert_eq!(missing_edge.validate(&g), Err(TdViolation::EdgeUncovered(1, 2)));
        let broken = TreeDecomposition::new(vec![set(3, &[0, 1]), set(3, &[2]), set(3, &[1, 2])], vec![(0, 1), (1, 2)]);
        assert_eq!(broken.validate(&g), Err(TdViolation::Disconnected(1)));
        let mut lying = TreeDecomposition::trivial(3);
        lying.width = 1;
        assert_eq!(lying.validate(&g), Err(TdViolation::WidthMismatch { declared: 1, actual: 2 }));
        let forest = TreeDecomposition::new(vec![set(3, &[0, 1]), set(3, &[1, 2])], vec![]);
        assert_eq!(forest.validate(&g), Err(TdViolation::NotATree));
    }

    #[test]
    fn compression_keeps_validity() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(
            vec![set(3, &[0]), set(3, &[0, 1]), set(3, &[1]), set(3, &[1, 2])],
            vec![(0, 1), (1, 2), (2, 3)],
        );
        let c = td.compressed();
        assert_eq!(c.len(), 2);
        c.validate(&g).unwrap();
    }
}
