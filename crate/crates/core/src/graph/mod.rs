//! Static undirected graphs and the queries the online algorithms are built on.
//!
//! Vertices are dense integers `0..n`. Adjacency lists are kept sorted so
//! that iteration order, and therefore every algorithm that walks them, is
//! deterministic.

mod io;
mod search;

pub use io::{parse_edge_list, write_edge_list, ParseError};
pub use search::{
    bfs_distances, bipartition, girth, n_d, oddgirth, Bipartition, Girth, OddGirth, Parity,
    Sides,
};
pub(crate) use search::{bfs_ball, bipartition_where};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex id.
pub type Vertex = usize;

/// A color. Assigned colors are always `>= 1`.
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("vertex {0} is uncolored")]
    Uncolored(Vertex),
    #[error("color 0 assigned to vertex {0}; colors start at 1")]
    ZeroColor(Vertex),
    #[error("coloring has {got} entries, graph has {n} vertices")]
    LengthMismatch { got: usize, n: usize },
    #[error("radius must be at least 1")]
    ZeroRadius,
    #[error("source set is empty")]
    EmptySourceSet,
    #[error("vertex {0} is not in the restriction set")]
    NotInRestriction(Vertex),
}

/// Undirected simple graph stored as sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates
    /// and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(g)
    }

    /// Inserts `u-v`. Returns `Ok(false)` if the edge was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    /// Appends a new isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Applies a vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self, GraphError> {
        check_permutation(perm, self.n())?;
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn check_permutation(perm: &[Vertex], n: usize) -> Result<(), GraphError> {
    if perm.len() != n {
        return Err(GraphError::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(GraphError::NotAPermutation(n));
        }
    }
    Ok(())
}

/// Arrival order of the vertices: `perm[i]` is the `i`-th revealed vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct VertexOrder(Vec<Vertex>);

impl VertexOrder {
    pub fn new(perm: Vec<Vertex>) -> Result<Self, GraphError> {
        check_permutation(&perm, perm.len())?;
        Ok(VertexOrder(perm))
    }

    pub fn identity(n: usize) -> Self {
        VertexOrder((0..n).collect())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `rank[v]` is the reveal position of `v`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            rank[v] = i;
        }
        rank
    }
}

impl TryFrom<Vec<Vertex>> for VertexOrder {
    type Error = GraphError;

    fn try_from(perm: Vec<Vertex>) -> Result<Self, Self::Error> {
        VertexOrder::new(perm)
    }
}

impl From<VertexOrder> for Vec<Vertex> {
    fn from(order: VertexOrder) -> Self {
        order.0
    }
}

/// Per-vertex color assignment; `None` means not yet colored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Coloring(Vec<Option<Color>>);

impl Coloring {
    pub fn uncolored(n: usize) -> Self {
        Coloring(vec![None; n])
    }

    pub fn from_colors(colors: Vec<Color>) -> Self {
        Coloring(colors.into_iter().map(Some).collect())
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.0[v]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        debug_assert!(c >= 1);
        self.0[v] = Some(c);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    /// Largest assigned color, 0 if nothing is colored.
    pub fn max_color(&self) -> Color {
        self.0.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.0
    }
}

/// Result of [`is_proper`]: either proper, or the first monochromatic edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Properness {
    Proper,
    Conflict { u: Vertex, v: Vertex, color: Color },
}

impl Properness {
    pub fn is_proper(self) -> bool {
        matches!(self, Properness::Proper)
    }
}

/// Checks that no edge is monochromatic. Every vertex must be colored.
pub fn is_proper(g: &Graph, c: &Coloring) -> Result<Properness, GraphError> {
    if c.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            got: c.len(),
            n: g.n(),
        });
    }
    for v in 0..g.n() {
        match c.get(v) {
            None => return Err(GraphError::Uncolored(v)),
            Some(0) => return Err(GraphError::ZeroColor(v)),
            Some(_) => {}
        }
    }
    for (u, v) in g.edges() {
        if c.get(u) == c.get(v) {
            return Ok(Properness::Conflict {
                u,
                v,
                color: c.get(u).unwrap_or(0),
            });
        }
    }
    Ok(Properness::Proper)
}

/// Membership bitmap over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMask {
    bits: Vec<bool>,
    count: usize,
}

impl VertexMask {
    pub fn new(n: usize) -> Self {
        VertexMask {
            bits: vec![false; n],
            count: 0,
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(n: usize, vs: I) -> Self {
        let mut mask = VertexMask::new(n);
        for v in vs {
            mask.insert(v);
        }
        mask
    }

    pub fn full(n: usize) -> Self {
        VertexMask {
            bits: vec![true; n],
            count: n,
        }
    }

    /// Returns `true` if `v` was newly inserted.
    pub fn insert(&mut self, v: Vertex) -> bool {
        if v >= self.bits.len() {
            self.bits.resize(v + 1, false);
        }
        let fresh = !std::mem::replace(&mut self.bits[v], true);
        self.count += usize::from(fresh);
        fresh
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.get(v).copied().unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }
}

/// Small named graphs used by tests, generators and the CLI.
pub mod named {
    use super::Graph;

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
            .expect("valid clique")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
            .expect("valid biclique")
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i-(i+5).
    pub fn petersen() -> Graph {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges).expect("valid Petersen graph")
    }
}
