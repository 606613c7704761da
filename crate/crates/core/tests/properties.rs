//! Randomized properties of the graph queries and the online engine, each
//! compared against a small oracle written here.

mod common;

use std::collections::VecDeque;

use oncolor_core::algorithms::{AlgKind, AlgSpec};
use oncolor_core::generators::{generate, order, Family, GenSpec, OrderSpec, Strategy as Order};
use oncolor_core::graph::{
    bfs_distances, bipartition, girth, n_d, oddgirth, Bipartition, Girth, Graph, OddGirth, Parity,
    VertexMask, VertexOrder,
};
use oncolor_core::verify::check_trace_with;
use proptest::prelude::*;

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn distances(g: &Graph, src: usize, skip: Option<(usize, usize)>) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if skip == Some((u.min(w), u.max(w))) {
                continue;
            }
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Shortest cycle: drop each edge in turn and reconnect its ends.
fn girth_oracle(g: &Graph) -> Option<usize> {
    g.edges()
        .filter_map(|(u, v)| {
            let d = distances(g, u, Some((u.min(v), u.max(v))))[v];
            (d != usize::MAX).then(|| d + 1)
        })
        .min()
}

/// Shortest odd closed walk, found in the parity double cover. The shortest
/// one is always a cycle.
fn oddgirth_oracle(g: &Graph) -> Option<usize> {
    let n = g.n();
    (0..n)
        .filter_map(|s| {
            let mut dist = vec![usize::MAX; 2 * n];
            dist[2 * s] = 0;
            let mut queue = VecDeque::from([2 * s]);
            while let Some(x) = queue.pop_front() {
                let (u, p) = (x / 2, x % 2);
                for &w in g.neighbors(u) {
                    let y = 2 * w + (1 - p);
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            (dist[2 * s + 1] != usize::MAX).then_some(dist[2 * s + 1])
        })
        .min()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn girth_and_oddgirth_match_oracles(g in small_graph(10)) {
        let want = girth_oracle(&g).map_or(Girth::Acyclic, Girth::Cycle);
        prop_assert_eq!(girth(&g), want);
        let want = oddgirth_oracle(&g).map_or(OddGirth::Bipartite, OddGirth::Odd);
        prop_assert_eq!(oddgirth(&g), want);
    }

    #[test]
    fn bfs_distances_are_symmetric(g in small_graph(10), cap in 1usize..6) {
        for u in 0..g.n() {
            let du = bfs_distances(&g, u, cap, None).unwrap();
            let full = distances(&g, u, None);
            for v in 0..g.n() {
                let expect = (v != u && full[v] <= cap).then_some(full[v]);
                prop_assert_eq!(du.get(&v).copied(), expect);
                if let Some(d) = expect {
                    let dv = bfs_distances(&g, v, cap, None).unwrap();
                    prop_assert_eq!(dv.get(&u).copied(), Some(d));
                }
            }
        }
    }

    #[test]
    fn odd_neighborhood_is_inside_full_neighborhood(g in small_graph(10), d in 1usize..5, seed in 0usize..10) {
        let s = [seed % g.n()];
        let all = n_d(&g, &s, d, Parity::All, None).unwrap();
        let odd = n_d(&g, &s, d, Parity::Odd, None).unwrap();
        prop_assert!(odd.is_subset(&all));
        let full = distances(&g, s[0], None);
        for v in all {
            prop_assert!(full[v] >= 1 && full[v] <= d);
            prop_assert_eq!(odd.contains(&v), full[v] % 2 == 1);
        }
    }

    #[test]
    fn bipartition_sides_are_independent(g in small_graph(10)) {
        let mask = VertexMask::full(g.n());
        for v in 0..g.n() {
            match bipartition(&g, v, &mask).unwrap() {
                Bipartition::Sides(s) => {
                    prop_assert!(s.own.contains(&v));
                    for side in [&s.own, &s.other] {
                        for &a in side.iter() {
                            for &b in side.iter() {
                                prop_assert!(!g.has_edge(a, b));
                            }
                        }
                    }
                    prop_assert!(oddgirth_oracle(&g).is_none() || s.own.len() + s.other.len() < g.n());
                }
                Bipartition::OddCycle { u, v: w } => {
                    prop_assert!(g.has_edge(u, w));
                    prop_assert!(oddgirth_oracle(&g).is_some());
                }
            }
        }
    }

    #[test]
    fn first_fit_is_proper_and_checked(g in small_graph(10), seed in any::<u64>()) {
        let ord = order(&g, &OrderSpec::new(Order::Random, seed), None);
        let spec = AlgSpec::new(AlgKind::Ff, 1);
        let trace = common::run(&g, &ord, spec);
        for (u, v) in g.edges() {
            prop_assert_ne!(trace.coloring().get(u), trace.coloring().get(v));
        }
        prop_assert!(check_trace_with(&trace, &spec, &g).overall);
    }
}

#[test]
fn replay_is_deterministic() {
    // Algorithm A only runs on the bipartite tree.
    for (family, first) in [("tree", AlgKind::A), ("random-girth-constrained:g_min=9,m=250", AlgKind::Ff)] {
        let g = common::gen(family, 200, 3).graph;
        let ord = order(&g, &OrderSpec::new(Order::Random, 11), None);
        for spec in [AlgSpec::new(first, 1), AlgSpec::new(AlgKind::Bnd, 2), AlgSpec::new(AlgKind::Bo, 2)] {
            let a = common::run(&g, &ord, spec);
            let b = common::run(&g, &ord, spec);
            assert_eq!(a.to_json(), b.to_json());
        }
    }
}

#[test]
fn colors_survive_relabeling() {
    let g = common::gen("random-girth-constrained:g_min=9,m=110", 100, 1).graph;
    let ord = order(&g, &OrderSpec::new(Order::Random, 5), None);
    // Reverse the labels and reveal the same vertices in the same order.
    let perm: Vec<usize> = (0..g.n()).rev().collect();
    let h = g.relabel(&perm).unwrap();
    let hord = VertexOrder::new(ord.as_slice().iter().map(|&v| perm[v]).collect()).unwrap();
    for spec in [
        AlgSpec::new(AlgKind::Ff, 1),
        AlgSpec::new(AlgKind::Bnd, 1),
        AlgSpec::new(AlgKind::Bnd, 2),
        AlgSpec::new(AlgKind::Bo, 2),
    ] {
        let a: Vec<u32> = common::run(&g, &ord, spec).steps.iter().map(|s| s.color).collect();
        let b: Vec<u32> = common::run(&h, &hord, spec).steps.iter().map(|s| s.color).collect();
        assert_eq!(a, b, "{}", spec.id());
    }
}

/// Every order of a small graph, First Fit's worst case.
fn first_fit_worst(g: &Graph) -> u32 {
    fn rec(g: &Graph, colors: &mut Vec<u32>, best: &mut u32) {
        let mut any = false;
        for v in 0..g.n() {
            if colors[v] != 0 {
                continue;
            }
            any = true;
            let mut c = 1;
            while g.neighbors(v).iter().any(|&u| colors[u] == c) {
                c += 1;
            }
            colors[v] = c;
            rec(g, colors, best);
            colors[v] = 0;
        }
        if !any {
            *best = (*best).max(colors.iter().copied().max().unwrap_or(0));
        }
    }
    let mut best = 0;
    rec(g, &mut vec![0; g.n()], &mut best);
    best
}

#[test]
fn adversarial_search_against_exhaustive_first_fit() {
    for seed in 0..6 {
        let g = generate(&GenSpec::new(Family::Tree, 8, seed)).unwrap();
        let worst = first_fit_worst(&g);
        // First Fit on a tree never needs more than log2(n) + 1 colors.
        assert!(worst <= 4);
        let ord = order(&g, &OrderSpec::new(Order::AdversarialSearch, seed).restarts(200), None);
        let found = common::run(&g, &ord, AlgSpec::new(AlgKind::Ff, 1)).colors_used;
        assert!(found <= worst);
        assert!(found >= worst.min(3), "seed {seed}: search found {found}, worst is {worst}");
    }
}

#[test]
fn adversarial_search_pushes_first_fit_on_trees() {
    let mut best = 0;
    for seed in 0..5 {
        let g = generate(&GenSpec::new(Family::Tree, 16, seed)).unwrap();
        let ord = order(&g, &OrderSpec::new(Order::AdversarialSearch, seed).restarts(100), None);
        best = best.max(common::run(&g, &ord, AlgSpec::new(AlgKind::Ff, 1)).colors_used);
    }
    assert!(best >= 3);
}

#[test]
fn fault_fixtures_trip_their_checks() {
    for fault in common::fault_fixtures() {
        let spec = fault.trace.alg_spec().unwrap();
        let g = fault.trace.graph().unwrap();
        let report = check_trace_with(&fault.trace, &spec, &g);
        let failed = report.failed();
        assert!(failed.contains(&fault.check), "{}: failed {failed:?}", fault.check);
        if fault.exact {
            assert_eq!(failed, vec![fault.check]);
        }
    }
}
