//! Library routines checked against brute-force references on random graphs.

mod common;

use std::collections::HashSet;

use anytw::exact::{decide_tw_leq, enumerate_pmcs_upto, exact_tw, tw_over_pi};
use anytw::separators::{enumerate_min_seps, is_minimal_separator, is_pmc, is_safe_for_width};
use anytw::triangulation::{is_chordal, mmaf};
use anytw::{CancelToken, ContractionForest, VertexSet};
use common::*;
use rand::Rng;

fn never() -> CancelToken {
    CancelToken::new()
}

#[test]
fn contraction_matches_label_merging() {
    let mut r = rng(11);
    for _ in 0..300 {
        let n = r.random_range(1..=10);
        let g = random_graph(n, 0.4, &mut r);
        let fe = random_forest(&g, 0.5, &mut r);
        let f = ContractionForest::from_edges(&g, fe.iter().copied()).unwrap();
        let m = g.contract(&f);
        let (adj, label) = naive_contract(&g, &fe);
        assert_eq!(masks(&m.graph), adj);
        assert_eq!(m.vertex_of, label);
    }
}

#[test]
fn min_seps_match_subset_enumeration() {
    let mut r = rng(1);
    for t in 0..300 {
        let n = r.random_range(1..=8);
        let p = [0.2, 0.4, 0.6][t % 3];
        let g = random_graph(n, p, &mut r);
        let want = brute_min_seps(&g);
        for max in [1, 2, 3, n] {
            let got: HashSet<Mask> = enumerate_min_seps(&g, max, &never()).unwrap().iter().map(to_mask).collect();
            let expect: HashSet<Mask> = want.iter().copied().filter(|s| s.count_ones() as usize <= max).collect();
            assert_eq!(got, expect, "{g:?} max {max}");
        }
    }
}

#[test]
fn min_seps_on_grids() {
    for (rows, cols) in [(3, 3), (3, 4), (4, 4)] {
        let g = grid(rows, cols);
        let want = brute_min_seps(&g);
        for max in 1..=5 {
            let got: HashSet<Mask> = enumerate_min_seps(&g, max, &never()).unwrap().iter().map(to_mask).collect();
            let expect: HashSet<Mask> = want.iter().copied().filter(|s| s.count_ones() as usize <= max).collect();
            assert_eq!(got, expect);
        }
    }
}

#[test]
fn pmc_test_matches_minimal_triangulations() {
    let mut r = rng(2);
    for t in 0..120 {
        let n = r.random_range(1..=7);
        let g = random_graph(n, [0.3, 0.5, 0.7][t % 3], &mut r);
        let pmcs = brute_pmcs(&g);
        let all: Mask = (1 << n) - 1;
        for x in 1..=all {
            assert_eq!(is_pmc(&g, &to_set(n, x)), pmcs.contains(&x), "{g:?} {x:b}");
        }
    }
}

#[test]
fn pmc_enumeration_matches_oracle() {
    let mut r = rng(3);
    for t in 0..120 {
        let n = r.random_range(1..=7);
        let g = random_graph(n, [0.3, 0.5, 0.7][t % 3], &mut r);
        let pmcs = brute_pmcs(&g);
        for bound in 1..=n {
            let got: HashSet<Mask> = enumerate_pmcs_upto(&g, bound, &never()).unwrap().iter().map(to_mask).collect();
            let want: HashSet<Mask> = pmcs.iter().copied().filter(|x| x.count_ones() as usize <= bound).collect();
            assert_eq!(got, want, "{g:?} bound {bound}");
        }
    }
}

#[test]
fn exact_matches_subset_recurrence() {
    let mut r = rng(4);
    for t in 0..400 {
        let n = r.random_range(1..=10);
        let g = random_graph(n, [0.2, 0.5, 0.8][t % 3], &mut r);
        let want = brute_tw(&g);
        let (k, td) = exact_tw(&g, None, None, &never()).unwrap();
        assert_eq!(k, want, "{g:?}");
        td.validate(&g).unwrap();
        assert_eq!(td.width, k);
        if k > 0 {
            assert!(decide_tw_leq(&g, k - 1, &never()).unwrap().is_none());
        }
    }
}

#[test]
fn exact_on_medium_graphs() {
    let mut r = rng(5);
    for _ in 0..25 {
        let n = r.random_range(12..=16);
        let g = random_graph(n, 0.3, &mut r);
        let (k, td) = exact_tw(&g, None, None, &never()).unwrap();
        assert_eq!(k, brute_tw(&g));
        td.validate(&g).unwrap();
    }
}

#[test]
fn dp_over_bounded_pmcs() {
    let mut r = rng(6);
    for _ in 0..150 {
        let n = r.random_range(1..=9);
        let g = random_graph(n, 0.45, &mut r);
        let tw = brute_tw(&g);
        let pi = enumerate_pmcs_upto(&g, tw + 1, &never()).unwrap();
        let res = tw_over_pi(&g, &pi, &never()).unwrap();
        assert_eq!(res.value, Some(tw));
        let w = res.witness.unwrap();
        w.validate(&g).unwrap();
        assert!(w.bags.iter().all(|b| pi.contains(b)));
    }
}

#[test]
fn safety_is_completion_width() {
    let mut r = rng(7);
    for _ in 0..80 {
        let n = r.random_range(2..=10);
        let g = random_graph(n, 0.4, &mut r);
        let tw = brute_tw(&g);
        let seps = enumerate_min_seps(&g, n, &never()).unwrap();
        for s in &seps {
            assert!(is_minimal_separator(&g, s));
            let completed = brute_tw(&g.with_clique(s));
            for k in tw..=tw + 1 {
                assert_eq!(is_safe_for_width(&g, s, k, &never()).unwrap(), completed <= k);
            }
        }
        // Separators of a minimal triangulation of optimal width are safe.
        if !seps.is_empty() {
            assert!(seps.iter().any(|s| is_safe_for_width(&g, s, tw, &never()).unwrap()));
        }
    }
}

#[test]
fn mmaf_is_minimal_and_cliques_are_pmcs() {
    let mut r = rng(8);
    for _ in 0..200 {
        let n = r.random_range(1..=12);
        let g = random_graph(n, 0.35, &mut r);
        let t = mmaf(&g, &mut r);
        let h = masks(&t.chordal);
        assert!(naive_chordal(&h));
        assert!(is_chordal(&t.chordal));
        for &(u, v) in &t.fill_edges {
            let mut h2 = h.clone();
            h2[u] &= !(1 << v);
            h2[v] &= !(1 << u);
            assert!(!naive_chordal(&h2));
        }
        let mut want = brute_maximal_cliques(&h);
        want.sort();
        let mut got: Vec<Mask> = t.cliques.iter().map(to_mask).collect();
        got.sort();
        assert_eq!(got, want);
        for c in &t.cliques {
            assert!(is_pmc(&g, c));
        }
        t.tree_decomposition().validate(&g).unwrap();
        if n <= 10 {
            assert!(t.width() >= brute_tw(&g));
        }
    }
}

#[test]
fn vertex_set_ops_match_masks() {
    let mut r = rng(9);
    for _ in 0..500 {
        let n = r.random_range(1..=64);
        let a: u64 = r.random::<u64>() & if n == 64 { u64::MAX } else { (1 << n) - 1 };
        let b: u64 = r.random::<u64>() & if n == 64 { u64::MAX } else { (1 << n) - 1 };
        let (sa, sb) = (to_set(n, a), to_set(n, b));
        assert_eq!(to_mask(&sa.union(&sb)), a | b);
        assert_eq!(to_mask(&sa.intersection(&sb)), a & b);
        assert_eq!(to_mask(&sa.difference(&sb)), a & !b);
        assert_eq!(sa.len(), a.count_ones() as usize);
        assert_eq!(sa.is_subset(&sb), a & !b == 0);
        assert_eq!(sa.to_vec(), (0..n).filter(|&v| a >> v & 1 == 1).collect::<Vec<_>>());
        let _ = VertexSet::full(n);
    }
}
