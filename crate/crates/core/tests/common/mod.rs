//! Instance corpora shared by the integration tests.
#![allow(dead_code)]

use oncolor_core::algorithms::{AlgKind, AlgSpec};
use oncolor_core::engine::{replay, ColoringTrace, Delta, OnlineInstance};
use oncolor_core::generators::{generate, order, Family, GenError, GenSpec, OrderSpec, Strategy};
use oncolor_core::graph::{girth, oddgirth, Graph, VertexOrder};

pub struct Instance {
    pub label: String,
    pub graph: Graph,
}

pub fn gen(family: &str, n: usize, seed: u64) -> Instance {
    let fam: Family = family.parse().unwrap();
    let graph = generate(&GenSpec::new(fam, n, seed))
        .or_else(GenError::into_partial)
        .unwrap();
    Instance {
        label: format!("{family} n={n} seed={seed}"),
        graph,
    }
}

/// Deterministic orders for one instance: the structured strategies plus
/// `random` seeded orders.
pub fn orders(g: &Graph, random: u64) -> Vec<(String, VertexOrder)> {
    let mut out = Vec::new();
    for s in [Strategy::Natural, Strategy::Bfs, Strategy::Dfs, Strategy::DegreeDesc] {
        out.push((s.to_string(), order(g, &OrderSpec::new(s, 0), None)));
    }
    for seed in 0..random {
        out.push((format!("random#{seed}"), order(g, &OrderSpec::new(Strategy::Random, seed), None)));
    }
    out
}

/// Any graph at all: dense and sparse random graphs, cliques included.
pub fn arbitrary() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..4 {
        for (n, p) in [(8, 0.5), (20, 0.3), (50, 0.1), (120, 0.05), (300, 0.02)] {
            out.push(gen(&format!("subdivision:core=random,p={p},t=1"), n, seed));
        }
        out.push(gen("tree", 200, seed));
        out.push(gen("random-bipartite:p=0.1", 100, seed));
    }
    out.push(gen("subdivision:core=k4,t=1", 0, 0));
    out.push(gen("cycle", 7, 0));
    out.push(gen("complete-bipartite", 30, 0));
    out
}

/// Bipartite instances.
pub fn bipartite() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..4 {
        for n in [16, 64, 256] {
            out.push(gen("tree", n, seed));
            out.push(gen("random-bipartite:p=0.08", n, seed));
        }
        out.push(gen("subdivision:core=random,p=0.2,t=2", 30, seed));
        out.push(gen("random-bipartite:p=0.01", 1000, seed));
    }
    out.push(gen("path", 50, 0));
    out.push(gen("cycle", 64, 0));
    out.push(gen("complete-bipartite:a=3", 20, 0));
    out.push(gen("forcing-tree:k=6", 256, 0));
    out
}

/// Instances with girth at least `g`.
pub fn girth_at_least(g: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..4 {
        for n in [30, 100, 300] {
            out.push(gen(&format!("random-girth-constrained:g_min={g},m={}", n + n / 4), n, seed));
        }
        out.push(gen("tree", 150, seed));
        let t = g.div_ceil(3);
        out.push(gen(&format!("subdivision:core=random,p=0.3,t={t}"), 12, seed));
    }
    out.push(gen(&format!("random-girth-constrained:g_min={g},m=1150"), 1000, 9));
    out.push(gen(&format!("random-girth-constrained:g_min={g},m=2200"), 2000, 9));
    out.push(gen("cycle", g, 0));
    out.push(gen("cycle", 3 * g + 1, 0));
    out.push(gen(&format!("subdivision:core=petersen,t={}", g.div_ceil(5)), 0, 0));
    for k in [4, 5, 6] {
        out.push(gen(&format!("forcing-tree:k={k}"), 1 << (k + 1), 0));
        out.push(gen(&format!("forcing-tree:k={k},link=false"), 1 << (k - 1), 0));
    }
    for inst in &out {
        assert!(girth(&inst.graph).at_least(g), "{} has girth {}", inst.label, girth(&inst.graph));
    }
    out
}

/// Instances with oddgirth at least `g`, bipartite ones included.
pub fn oddgirth_at_least(g: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let t3 = odd_at_least(g.div_ceil(3));
    for seed in 0..4 {
        out.push(gen(&format!("subdivision:core=random,p=0.3,t={t3}"), 12, seed));
        out.push(gen(&format!("subdivision:core=random,p=0.1,t={t3}"), 40, seed));
        out.push(gen(&format!("random-girth-constrained:g_min={g},m=330"), 300, seed));
        out.push(gen("random-bipartite:p=0.05", 200, seed));
        out.push(gen("tree", 200, seed));
        // Dense enough that late vertices meet every H-class.
        out.push(gen("random-bipartite:p=0.3", 120, seed));
        out.push(gen(&format!("subdivision:core=random,p=0.7,t={t3}"), 16, seed));
    }
    out.push(gen(&format!("subdivision:core=c3,t={t3}"), 0, 0));
    out.push(gen(&format!("subdivision:core=c5,t={}", odd_at_least(g.div_ceil(5))), 0, 0));
    out.push(gen(&format!("subdivision:core=c7,t={}", odd_at_least(g.div_ceil(7))), 0, 0));
    out.push(gen(&format!("subdivision:core=k4,t={t3}"), 0, 0));
    out.push(gen(&format!("subdivision:core=petersen,t={}", odd_at_least(g.div_ceil(5))), 0, 0));
    out.push(gen(&format!("subdivision:core=random,p=0.05,t={t3}"), 120, 5));
    out.push(gen(&format!("random-girth-constrained:g_min={g},m=2100"), 2000, 9));
    out.push(gen("cycle", odd_at_least(g), 0));
    for inst in &out {
        assert!(
            oddgirth(&inst.graph).at_least(g),
            "{} has oddgirth {}",
            inst.label,
            oddgirth(&inst.graph)
        );
    }
    out
}

fn odd_at_least(x: usize) -> usize {
    x | 1
}

pub fn run(g: &Graph, order: &VertexOrder, spec: AlgSpec) -> ColoringTrace {
    replay(OnlineInstance::new(g, order).unwrap(), &spec).unwrap()
}

pub fn run_natural(g: &Graph, spec: AlgSpec) -> ColoringTrace {
    run(g, &VertexOrder::identity(g.n()), spec)
}

/// A doctored trace and the check it must trip. With `exact`, no other
/// check may fail.
pub struct Fault {
    pub check: &'static str,
    pub trace: ColoringTrace,
    pub exact: bool,
}

fn bnd1() -> AlgSpec {
    AlgSpec::new(AlgKind::Bnd, 1)
}

fn with_deltas(t: &mut ColoringTrace, v: usize, f: impl FnOnce(&mut Vec<Delta>)) {
    let step = t.steps.iter_mut().find(|s| s.v == v).unwrap();
    f(&mut step.deltas);
}

fn recolor(t: &mut ColoringTrace, v: usize, color: u32) {
    t.steps.iter_mut().find(|s| s.v == v).unwrap().color = color;
    t.colors_used = t.steps.iter().map(|s| s.color).max().unwrap();
}

/// Two disjoint K5s, each revealed K4 first: with n = 10 the step-1 palette
/// is 4, so both fifth vertices open classes.
fn two_k5() -> Graph {
    let mut edges = Vec::new();
    for base in [0, 5] {
        for u in base..base + 5 {
            for v in u + 1..base + 5 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(10, edges).unwrap()
}

/// Triangle 0,1,2 saturates 3 (class 1, witnesses 0,1,2). Vertex 6 sees
/// 4, 5 and 2, so it joins through witness 2 while 0 and 1 sit at distance 2.
fn join_graph() -> Graph {
    Graph::from_edges(
        7,
        [(0, 1), (0, 2), (1, 2), (3, 0), (3, 1), (3, 2), (4, 5), (6, 4), (6, 5), (6, 2)],
    )
    .unwrap()
}

/// Odd-girth run with r = 1, B = 4 (n = 4, d = 4): 0-1, 3-0 and then 2
/// closes the triangle 0,1,2, so it opens class 1 with witnesses 0 and 1.
/// Vertex 3 is an H-vertex at distance 2 from 2.
fn bo_triangle() -> ColoringTrace {
    let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
    run(&g, &VertexOrder::new(vec![0, 1, 3, 2]).unwrap(), AlgSpec::new(AlgKind::Bo, 4))
}

pub fn fault_fixtures() -> Vec<Fault> {
    let mut out = Vec::new();

    let mut t = run_natural(&two_k5(), bnd1());
    with_deltas(&mut t, 9, |ds| match &mut ds[0] {
        Delta::WCreate { members, .. } => members.push(0),
        other => panic!("expected a new class, got {other:?}"),
    });
    out.push(Fault { check: "w_disjoint", trace: t, exact: false });

    // 16-vertex tree forcing First Fit to 5 > K1 = 4 at the root (vertex 15).
    let tree = gen("forcing-tree:k=5", 16, 0).graph;
    let clean = run_natural(&tree, bnd1());
    let mut t = clean.clone();
    // Vertex 0 is the root's child colored 1, a leaf; 2 keeps it proper.
    assert_eq!((t.steps[0].color, tree.degree(0)), (1, 1));
    recolor(&mut t, 0, 2);
    out.push(Fault { check: "founder_saturation", trace: t, exact: true });

    let mut t = clean;
    recolor(&mut t, 15, 9);
    out.push(Fault { check: "class_colors", trace: t, exact: true });

    let mut t = run_natural(&join_graph(), bnd1());
    with_deltas(&mut t, 6, |ds| {
        assert_eq!(ds[0], Delta::WJoin { class: 1, witness: 2 });
        ds[0] = Delta::WJoin { class: 1, witness: 0 };
    });
    out.push(Fault { check: "step2_geometry", trace: t, exact: true });

    let mut t = bo_triangle();
    with_deltas(&mut t, 2, |ds| match &mut ds[0] {
        Delta::WCreate { members, .. } => {
            assert_eq!(members, &vec![0, 1]);
            members.push(3);
        }
        other => panic!("expected a new class, got {other:?}"),
    });
    out.push(Fault { check: "parity", trace: t, exact: true });

    let mut t = bo_triangle();
    recolor(&mut t, 3, 50);
    out.push(Fault { check: "h_block", trace: t, exact: true });

    // C5 in cycle order with d = 2: vertex 4 lands in H_2; claim 0 joins too.
    let mut t = run_natural(&gen("cycle", 5, 0).graph, AlgSpec::new(AlgKind::Bo, 2));
    with_deltas(&mut t, 4, |ds| ds.push(Delta::HJoin { class: 2, vertex: 0, local: 1 }));
    out.push(Fault { check: "h_disjoint", trace: t, exact: false });

    let mut t = run_natural(&gen("cycle", 6, 0).graph, AlgSpec::new(AlgKind::Ff, 1));
    recolor(&mut t, 1, 1);
    out.push(Fault { check: "proper", trace: t, exact: false });

    let mut t = run_natural(&gen("path", 4, 0).graph, AlgSpec::new(AlgKind::A, 1));
    t.steps.pop();
    out.push(Fault { check: "steps_complete", trace: t, exact: false });

    out
}
