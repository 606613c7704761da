use std::collections::HashSet;

use thiserror::Error;

use super::{offline_classes, AlgKind};
use crate::engine::{ColoringTrace, Delta, TraceError};
use crate::graph::{bipartition_where, Bipartition, Coloring, Graph, Vertex};

#[derive(Debug, Error)]
pub enum FinishError {
    #[error("trace was produced by `{0}`, not bo-offline")]
    WrongAlgorithm(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("H-class {class} is not bipartite (edge {u}-{v})")]
    NotBipartite { class: usize, u: Vertex, v: Vertex },
    #[error("vertex {0} belongs to no class")]
    Unassigned(Vertex),
    #[error("trace has {trace} vertices, graph has {graph}")]
    SizeMismatch { trace: usize, graph: usize },
}

/// Recolors a completed offline run: each H-class `i` gets the two colors
/// `2i - 1, 2i` by 2-coloring its components, and witness class `j` gets
/// `2r + j`.
pub fn offline_bipartite_finish(trace: &ColoringTrace, g: &Graph) -> Result<Coloring, FinishError> {
    let spec = trace.alg_spec()?;
    if spec.kind != AlgKind::BoOffline || spec.robust || spec.unknown_n {
        return Err(FinishError::WrongAlgorithm(trace.alg.clone()));
    }
    if trace.n != g.n() {
        return Err(FinishError::SizeMismatch {
            trace: trace.n,
            graph: g.n(),
        });
    }
    let r = offline_classes(trace.n, trace.d as usize);
    let mut h_class: Vec<Option<usize>> = vec![None; g.n()];
    let mut out = Coloring::uncolored(g.n());
    for step in &trace.steps {
        for delta in &step.deltas {
            match *delta {
                Delta::HJoin { class, vertex, .. } => h_class[vertex] = Some(class),
                Delta::WCreate { class, .. } | Delta::WJoin { class, .. } => {
                    out.set(step.v, (2 * r + class) as u32);
                }
                _ => {}
            }
        }
    }

    let mut done: HashSet<Vertex> = HashSet::new();
    for v in 0..g.n() {
        let Some(class) = h_class[v] else { continue };
        if done.contains(&v) {
            continue;
        }
        match bipartition_where(g, v, |u| h_class[u] == Some(class)) {
            Bipartition::Sides(sides) => {
                let low = (2 * class - 1) as u32;
                for u in sides.own {
                    out.set(u, low);
                    done.insert(u);
                }
                for u in sides.other {
                    out.set(u, low + 1);
                    done.insert(u);
                }
            }
            Bipartition::OddCycle { u, v } => return Err(FinishError::NotBipartite { class, u, v }),
        }
    }
    if let Some(v) = (0..g.n()).find(|&v| out.get(v).is_none()) {
        return Err(FinishError::Unassigned(v));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgSpec;
    use crate::engine::{replay, OnlineInstance};
    use crate::graph::{is_proper, named, VertexOrder};

    fn finish(g: &Graph, order: VertexOrder, d: u32) -> Coloring {
        let t = replay(
            OnlineInstance::new(g, &order).unwrap(),
            &AlgSpec::new(AlgKind::BoOffline, d),
        )
        .unwrap();
        let c = offline_bipartite_finish(&t, g).unwrap();
        assert!(is_proper(g, &c).unwrap().is_proper());
        c
    }

    #[test]
    fn bipartite_graph_needs_two_colors() {
        let g = named::complete_bipartite(3, 5);
        let c = finish(&g, VertexOrder::new(vec![0, 5, 3, 1, 7, 2, 4, 6]).unwrap(), 2);
        assert_eq!(c.max_color(), 2);
    }

    #[test]
    fn odd_cycle_within_formula() {
        // C9, d = 2: r = 2, so at most 2r + n/(rd) + 2 = 4 + 2.25 + 2 colors.
        let g = named::cycle(9);
        let c = finish(&g, VertexOrder::identity(9), 2);
        assert!(f64::from(c.max_color()) <= 4.0 + 9.0 / 4.0 + 2.0);
    }

    #[test]
    fn rejects_other_algorithms() {
        let g = named::path(3);
        let order = VertexOrder::identity(3);
        let t = replay(OnlineInstance::new(&g, &order).unwrap(), &AlgSpec::new(AlgKind::Ff, 1)).unwrap();
        assert!(matches!(
            offline_bipartite_finish(&t, &g),
            Err(FinishError::WrongAlgorithm(_))
        ));
    }
}
