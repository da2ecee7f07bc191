//! Minor certificates for treewidth lower bounds.

use thiserror::Error;

use crate::cancel::CancelToken;
use crate::exact::{decide_tw_leq, ExactError};
use crate::graph::{Graph, VertexSet};

/// Disjoint connected vertex groups whose quotient is a minor of treewidth at
/// least `claimed_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCertificate {
    pub claimed_k: usize,
    pub groups: Vec<VertexSet>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("group {0} mentions vertex {1} outside the graph")]
    VertexOutOfRange(usize, usize),
    #[error("vertex {vertex} is in groups {first} and {second}")]
    Overlap { vertex: usize, first: usize, second: usize },
    #[error("group {0} is not connected")]
    DisconnectedGroup(usize),
    #[error("minor has treewidth below the claimed {claimed}")]
    Shortfall { claimed: usize },
    #[error("exact check failed: {0}")]
    Exact(#[from] ExactError),
}

impl MinorCertificate {
    pub fn vertex_count(&self) -> usize {
        self.groups.len()
    }

    /// The minor described by the groups.
    pub fn minor(&self, g: &Graph) -> Graph {
        g.quotient(&self.groups)
    }
}

/// Checks the groups form a minor of `g` and that its treewidth is at least
/// the claimed value.
pub fn verify_certificate(g: &Graph, cert: &MinorCertificate, cancel: &CancelToken) -> Result<(), CertError> {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, grp) in cert.groups.iter().enumerate() {
        if grp.is_empty() {
            return Err(CertError::EmptyGroup(i));
        }
        for v in grp {
            if v >= g.n() {
                return Err(CertError::VertexOutOfRange(i, v));
            }
            if owner[v] != usize::MAX {
                return Err(CertError::Overlap { vertex: v, first: owner[v], second: i });
            }
            owner[v] = i;
        }
        if !g.is_connected_set(grp) {
            return Err(CertError::DisconnectedGroup(i));
        }
    }
    if cert.claimed_k == 0 {
        return if cert.groups.is_empty() { Err(CertError::Shortfall { claimed: 0 }) } else { Ok(()) };
    }
    let h = cert.minor(g);
    match decide_tw_leq(&h, cert.claimed_k - 1, cancel)? {
        Some(_) => Err(CertError::Shortfall { claimed: cert.claimed_k }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singletons(n: usize) -> Vec<VertexSet> {
        (0..n).map(|v| VertexSet::singleton(n, v)).collect()
    }

    #[test]
    fn k5_singletons() {
        let g = Graph::new(5).with_clique(&VertexSet::full(5));
        let c = CancelToken::new();
        assert_eq!(verify_certificate(&g, &MinorCertificate { claimed_k: 4, groups: singletons(5) }, &c), Ok(()));
        assert_eq!(
            verify_certificate(&g, &MinorCertificate { claimed_k: 5, groups: singletons(5) }, &c),
            Err(CertError::Shortfall { claimed: 5 })
        );
        let mut overlap = singletons(5);
        overlap[1].insert(0);
        assert!(matches!(
            verify_certificate(&g, &MinorCertificate { claimed_k: 4, groups: overlap }, &c),
            Err(CertError::Overlap { vertex: 0, .. })
        ));
    }

    #[test]
    fn disconnected_group_rejected() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let cert = MinorCertificate { claimed_k: 1, groups: vec![VertexSet::from_iter(3, [0, 2])] };
        assert_eq!(verify_certificate(&g, &cert, &CancelToken::new()), Err(CertError::DisconnectedGroup(0)));
    }

    #[test]
    fn contracted_cycle() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let cert = MinorCertificate {
            claimed_k: 2,
            groups: vec![VertexSet::from_iter(5, [0, 1, 2]), VertexSet::singleton(5, 3), VertexSet::singleton(5, 4)],
        };
        assert_eq!(verify_certificate(&g, &cert, &CancelToken::new()), Ok(()));
    }
}
