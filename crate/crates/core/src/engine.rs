//! Replay loop: reveals vertices one at a time and lets an online colorer
//! see only the subgraph induced by the revealed prefix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{AlgError, AlgSpec};
use crate::graph::{
    bfs_ball, bipartition_where, Bipartition, Color, Coloring, Graph, GraphError, Vertex,
    VertexMask, VertexOrder,
};

/// A graph together with the order its vertices arrive in.
#[derive(Debug, Clone, Copy)]
pub struct OnlineInstance<'a> {
    pub graph: &'a Graph,
    pub order: &'a VertexOrder,
}

impl<'a> OnlineInstance<'a> {
    pub fn new(graph: &'a Graph, order: &'a VertexOrder) -> Result<Self, GraphError> {
        if order.len() != graph.n() {
            return Err(GraphError::NotAPermutation(graph.n()));
        }
        Ok(OnlineInstance { graph, order })
    }
}

/// The part of the graph an online colorer may look at: the revealed
/// vertices and the edges among them.
#[derive(Clone, Copy)]
pub struct View<'a> {
    graph: &'a Graph,
    revealed: &'a VertexMask,
    prefix: &'a [Vertex],
}

impl<'a> View<'a> {
    pub fn new(graph: &'a Graph, revealed: &'a VertexMask, prefix: &'a [Vertex]) -> Self {
        debug_assert_eq!(revealed.count(), prefix.len());
        View {
            graph,
            revealed,
            prefix,
        }
    }

    /// Number of revealed vertices.
    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    /// Revealed vertices in reveal order.
    pub fn revealed(&self) -> &'a [Vertex] {
        self.prefix
    }

    pub fn is_revealed(&self, v: Vertex) -> bool {
        self.revealed.contains(v)
    }

    /// Exclusive upper bound on vertex ids, for sizing per-vertex tables.
    pub fn id_bound(&self) -> usize {
        self.graph.n()
    }

    /// Revealed neighbors of a revealed vertex.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + 'a {
        let revealed = self.revealed;
        let ns: &'a [Vertex] = if revealed.contains(v) {
            self.graph.neighbors(v)
        } else {
            &[]
        };
        ns.iter().copied().filter(move |&u| revealed.contains(u))
    }

    /// Edges among revealed vertices, `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + 'a {
        let prefix = self.prefix;
        let this = *self;
        prefix
            .iter()
            .flat_map(move |&u| this.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Vertices at view-distance `1..=cap` from `src`, in BFS order.
    pub fn ball(&self, src: Vertex, cap: usize) -> Vec<(Vertex, usize)> {
        if !self.is_revealed(src) {
            return Vec::new();
        }
        let revealed = self.revealed;
        bfs_ball(self.graph, src, cap, |u| revealed.contains(u))
    }

    /// Two-colors the component of `of` in the view restricted to `of` and
    /// the revealed vertices accepted by `allowed`.
    pub fn bipartition_within<F>(&self, of: Vertex, allowed: F) -> Bipartition
    where
        F: Fn(Vertex) -> bool,
    {
        let revealed = self.revealed;
        bipartition_where(self.graph, of, |u| revealed.contains(u) && allowed(u))
    }
}

/// Which rule of the algorithm assigned the color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// First Fit.
    Ff,
    /// Algorithm A on the whole input.
    A,
    /// Small-palette step (First Fit, or an H-class for the odd-girth variant).
    Step1,
    /// Reuse of an existing witness-class color.
    Step2,
    /// Opening of a new witness class.
    Step3,
    /// Fallback palette after the inner algorithm's assumption broke.
    Overflow,
}

/// State change recorded alongside a step. Class indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Delta {
    WCreate {
        class: usize,
        color: Color,
        members: Vec<Vertex>,
    },
    WJoin {
        class: usize,
        witness: Vertex,
    },
    HJoin {
        class: usize,
        vertex: Vertex,
        local: Color,
    },
    Overflow {
        inner: Option<Color>,
    },
    Phase {
        index: usize,
        size: usize,
        offset: Color,
    },
}

impl Delta {
    /// Rewrites every vertex id mentioned in the delta.
    pub fn map_vertices<F: Fn(Vertex) -> Vertex>(&mut self, f: F) {
        match self {
            Delta::WCreate { members, .. } => members.iter_mut().for_each(|v| *v = f(*v)),
            Delta::WJoin { witness, .. } => *witness = f(*witness),
            Delta::HJoin { vertex, .. } => *vertex = f(*vertex),
            Delta::Overflow { .. } | Delta::Phase { .. } => {}
        }
    }

    pub fn shift_colors(&mut self, offset: Color) {
        match self {
            Delta::WCreate { color, .. } => *color += offset,
            Delta::Overflow { inner: Some(c) } => *c += offset,
            _ => {}
        }
    }
}

/// What a colorer decided for one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub color: Color,
    pub rule: Rule,
    pub deltas: Vec<Delta>,
}

impl Decision {
    pub fn new(color: Color, rule: Rule) -> Self {
        Decision {
            color,
            rule,
            deltas: Vec::new(),
        }
    }

    pub fn with(mut self, delta: Delta) -> Self {
        self.deltas.push(delta);
        self
    }
}

/// An online coloring algorithm. `step` is called once per vertex in reveal
/// order with a view that already contains the new vertex.
pub trait OnlineColorer {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError>;

    /// Largest color emitted on inputs that meet the algorithm's
    /// precondition, if the algorithm can bound it up front.
    fn palette_cap(&self) -> Option<Color>;
}

impl<T: OnlineColorer + ?Sized> OnlineColorer for Box<T> {
    fn step(&mut self, view: &View<'_>, v: Vertex) -> Result<Decision, AlgError> {
        (**self).step(view, v)
    }

    fn palette_cap(&self) -> Option<Color> {
        (**self).palette_cap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub v: Vertex,
    pub color: Color,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<Delta>,
}

/// Full record of one replay. Self-contained: it carries the edge list and
/// the order, so it can be checked without the original files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringTrace {
    pub alg: String,
    pub d: u32,
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    pub order: Vec<Vertex>,
    pub steps: Vec<StepRecord>,
    pub colors_used: Color,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("malformed trace: {0}")]
    Json(#[from] serde_json::Error),
    #[error("trace graph: {0}")]
    Graph(#[from] GraphError),
    #[error("unknown algorithm id `{0}`")]
    UnknownAlg(String),
}

impl ColoringTrace {
    pub fn graph(&self) -> Result<Graph, GraphError> {
        Graph::from_edges(self.n, self.edges.iter().copied())
    }

    pub fn alg_spec(&self) -> Result<AlgSpec, TraceError> {
        AlgSpec::from_id(&self.alg, self.d).map_err(|_| TraceError::UnknownAlg(self.alg.clone()))
    }

    /// Final coloring; vertices without a step record stay uncolored.
    pub fn coloring(&self) -> Coloring {
        let mut c = Coloring::uncolored(self.n);
        for s in &self.steps {
            if s.v < self.n && s.color >= 1 {
                c.set(s.v, s.color);
            }
        }
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, TraceError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Steps and color count, ignoring the algorithm label.
    pub fn same_run(&self, other: &ColoringTrace) -> bool {
        self.steps == other.steps && self.colors_used == other.colors_used
    }

    pub fn overflow_events(&self) -> usize {
        self.steps.iter().filter(|s| s.rule == Rule::Overflow).count()
    }
}

/// A witness class reconstructed from trace deltas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WClassState {
    pub color: Color,
    pub founder: Vertex,
    pub founder_step: usize,
    pub members: Vec<Vertex>,
    /// `(step index, vertex, witness)` for every step-2 join.
    pub joins: Vec<(usize, Vertex, Vertex)>,
}

/// One H-class: `(step index, vertex, local color)` in join order.
pub type HClassState = Vec<(usize, Vertex, Color)>;

/// Algorithm state rebuilt from the deltas of a trace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExpandedState {
    pub w_classes: BTreeMap<usize, WClassState>,
    pub h_classes: BTreeMap<usize, HClassState>,
    /// Joins that named a class that was never created.
    pub dangling_joins: Vec<(usize, usize)>,
}

impl ExpandedState {
    pub fn expand(trace: &ColoringTrace) -> Self {
        let mut st = ExpandedState::default();
        for (i, s) in trace.steps.iter().enumerate() {
            for delta in &s.deltas {
                match delta {
                    Delta::WCreate {
                        class,
                        color,
                        members,
                    } => {
                        st.w_classes.insert(
                            *class,
                            WClassState {
                                color: *color,
                                founder: s.v,
                                founder_step: i,
                                members: members.clone(),
                                joins: Vec::new(),
                            },
                        );
                    }
                    Delta::WJoin { class, witness } => match st.w_classes.get_mut(class) {
                        Some(w) => w.joins.push((i, s.v, *witness)),
                        None => st.dangling_joins.push((i, *class)),
                    },
                    Delta::HJoin {
                        class,
                        vertex,
                        local,
                    } => st.h_classes.entry(*class).or_default().push((i, *vertex, *local)),
                    Delta::Overflow { .. } | Delta::Phase { .. } => {}
                }
            }
        }
        st
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("invalid algorithm parameters: {0}")]
    Params(#[from] AlgError),
    #[error("assumption violated at step {step} (vertex {vertex}): {reason}")]
    AssumptionViolated {
        step: usize,
        vertex: Vertex,
        reason: String,
        partial: Box<ColoringTrace>,
    },
}

/// Replays `alg` on `inst`, building the colorer from its spec.
pub fn replay(inst: OnlineInstance<'_>, alg: &AlgSpec) -> Result<ColoringTrace, ReplayError> {
    let mut colorer = alg.build(inst.graph.n())?;
    replay_with(inst, colorer.as_mut(), &alg.id(), alg.d)
}

/// Replays an already constructed colorer. The colorer never sees more than
/// the revealed prefix. A color that clashes with a revealed neighbor, or an
/// algorithm error, aborts the replay with the partial trace attached.
pub fn replay_with(
    inst: OnlineInstance<'_>,
    colorer: &mut dyn OnlineColorer,
    alg_id: &str,
    d: u32,
) -> Result<ColoringTrace, ReplayError> {
    let g = inst.graph;
    let n = g.n();
    let mut revealed = VertexMask::new(n);
    let mut prefix = Vec::with_capacity(n);
    let mut colors: Vec<Color> = vec![0; n];
    let mut trace = ColoringTrace {
        alg: alg_id.to_string(),
        d,
        n,
        edges: g.edges().collect(),
        order: inst.order.as_slice().to_vec(),
        steps: Vec::with_capacity(n),
        colors_used: 0,
    };
    for (step, &v) in inst.order.as_slice().iter().enumerate() {
        revealed.insert(v);
        prefix.push(v);
        let view = View::new(g, &revealed, &prefix);
        let violation = |reason: String, trace: ColoringTrace| ReplayError::AssumptionViolated {
            step,
            vertex: v,
            reason,
            partial: Box::new(trace),
        };
        let decision = match colorer.step(&view, v) {
            Ok(dec) => dec,
            Err(e) => return Err(violation(e.to_string(), trace)),
        };
        if decision.color == 0 {
            return Err(violation("color 0 emitted".into(), trace));
        }
        if let Some(u) = view.neighbors(v).find(|&u| colors[u] == decision.color) {
            let reason = format!("color {} already on neighbor {u}", decision.color);
            return Err(violation(reason, trace));
        }
        colors[v] = decision.color;
        trace.colors_used = trace.colors_used.max(decision.color);
        trace.steps.push(StepRecord {
            v,
            color: decision.color,
            rule: decision.rule,
            deltas: decision.deltas,
        });
    }
    Ok(trace)
}
