use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Graph, GraphError, Vertex, VertexMask};

/// Which distances count towards a neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    All,
    Odd,
}

impl Parity {
    pub fn admits(self, dist: usize) -> bool {
        match self {
            Parity::All => true,
            Parity::Odd => dist % 2 == 1,
        }
    }
}

/// Breadth-first ball around `src` restricted to vertices accepted by
/// `allowed`. Returns `(vertex, distance)` pairs with `1 <= distance <= cap`
/// in BFS discovery order. `src` itself is always traversable.
pub(crate) fn bfs_ball<F>(g: &Graph, src: Vertex, cap: usize, allowed: F) -> Vec<(Vertex, usize)>
where
    F: Fn(Vertex) -> bool,
{
    let mut out = Vec::new();
    if cap == 0 {
        return out;
    }
    let mut dist: HashMap<Vertex, usize> = HashMap::new();
    dist.insert(src, 0);
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        if dx == cap {
            continue;
        }
        for &y in g.neighbors(x) {
            if !allowed(y) || dist.contains_key(&y) {
                continue;
            }
            dist.insert(y, dx + 1);
            out.push((y, dx + 1));
            queue.push_back(y);
        }
    }
    out
}

/// Shortest-path distances from `src`, up to `cap`, in the subgraph induced
/// by `restrict ∪ {src}` (or in `g` when `restrict` is `None`). The source
/// itself is not reported.
pub fn bfs_distances(
    g: &Graph,
    src: Vertex,
    cap: usize,
    restrict: Option<&VertexMask>,
) -> Result<BTreeMap<Vertex, usize>, GraphError> {
    g.check_vertex(src)?;
    let ball = match restrict {
        Some(mask) => bfs_ball(g, src, cap, |v| mask.contains(v)),
        None => bfs_ball(g, src, cap, |_| true),
    };
    Ok(ball.into_iter().collect())
}

/// `N_d(S)` or `N_{d,odd}(S)`: vertices outside `s` at positive distance at
/// most `d` (odd, for [`Parity::Odd`]) from some member of `s`.
pub fn n_d(
    g: &Graph,
    s: &[Vertex],
    d: usize,
    parity: Parity,
    restrict: Option<&VertexMask>,
) -> Result<BTreeSet<Vertex>, GraphError> {
    if d == 0 {
        return Err(GraphError::ZeroRadius);
    }
    if s.is_empty() {
        return Err(GraphError::EmptySourceSet);
    }
    let mut out = BTreeSet::new();
    for &v in s {
        for (u, dist) in bfs_distances(g, v, d, restrict)? {
            if parity.admits(dist) {
                out.insert(u);
            }
        }
    }
    for v in s {
        out.remove(v);
    }
    Ok(out)
}

/// Length of the shortest cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl Girth {
    pub fn at_least(self, len: usize) -> bool {
        match self {
            Girth::Cycle(g) => g >= len,
            Girth::Acyclic => true,
        }
    }
}

/// Length of the shortest odd cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OddGirth {
    Odd(usize),
    Bipartite,
}

impl OddGirth {
    pub fn at_least(self, len: usize) -> bool {
        match self {
            OddGirth::Odd(g) => g >= len,
            OddGirth::Bipartite => true,
        }
    }

    pub fn is_bipartite(self) -> bool {
        self == OddGirth::Bipartite
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(g) => write!(f, "{g}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

impl fmt::Display for OddGirth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddGirth::Odd(g) => write!(f, "{g}"),
            OddGirth::Bipartite => f.write_str("bipartite"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for OddGirth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

const UNSEEN: usize = usize::MAX;

/// Exact girth. A BFS from every root; each non-tree edge `x-y` closes a
/// walk of length `dist(x) + dist(y) + 1` that contains a cycle no longer
/// than itself, and a root lying on a shortest cycle realizes it exactly.
pub fn girth(g: &Graph) -> Girth {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![UNSEEN; n];
    let mut parent = vec![UNSEEN; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = UNSEEN;
            parent[v] = UNSEEN;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        queue.clear();
        queue.push_back(root);
        'bfs: while let Some(x) = queue.pop_front() {
            if 2 * dist[x] >= best {
                break;
            }
            for &y in g.neighbors(x) {
                if dist[y] == UNSEEN {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    touched.push(y);
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                    if best == 3 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 3 {
            break;
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Cycle(best)
    }
}

/// Exact oddgirth. An edge joining two vertices on the same BFS level `k`
/// witnesses an odd closed walk of length `2k + 1`; a root on a shortest
/// odd cycle sees that cycle's antipodal edge on one level.
pub fn oddgirth(g: &Graph) -> OddGirth {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![UNSEEN; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = UNSEEN;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        queue.clear();
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &y in g.neighbors(x) {
                if dist[y] == UNSEEN {
                    dist[y] = dist[x] + 1;
                    touched.push(y);
                    queue.push_back(y);
                } else if dist[y] == dist[x] {
                    best = best.min(2 * dist[x] + 1);
                }
            }
        }
        if best == 3 {
            break;
        }
    }
    if best == usize::MAX {
        OddGirth::Bipartite
    } else {
        OddGirth::Odd(best)
    }
}

/// The two color classes of a connected bipartite component. `own` holds the
/// queried vertex. Both lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sides {
    pub own: Vec<Vertex>,
    pub other: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    Sides(Sides),
    /// An edge whose endpoints were forced onto the same side.
    OddCycle { u: Vertex, v: Vertex },
}

impl Bipartition {
    pub fn sides(self) -> Option<Sides> {
        match self {
            Bipartition::Sides(s) => Some(s),
            Bipartition::OddCycle { .. } => None,
        }
    }
}

pub(crate) fn bipartition_where<F>(g: &Graph, of: Vertex, allowed: F) -> Bipartition
where
    F: Fn(Vertex) -> bool,
{
    let mut side: HashMap<Vertex, bool> = HashMap::new();
    side.insert(of, false);
    let mut queue = VecDeque::from([of]);
    let mut conflict = None;
    while let Some(x) = queue.pop_front() {
        let sx = side[&x];
        for &y in g.neighbors(x) {
            if y != of && !allowed(y) {
                continue;
            }
            match side.get(&y) {
                None => {
                    side.insert(y, !sx);
                    queue.push_back(y);
                }
                Some(&sy) if sy == sx => {
                    conflict.get_or_insert((x.min(y), x.max(y)));
                }
                Some(_) => {}
            }
        }
    }
    if let Some((u, v)) = conflict {
        return Bipartition::OddCycle { u, v };
    }
    let (mut own, mut other): (Vec<_>, Vec<_>) = side.into_iter().partition(|&(_, s)| !s);
    own.sort_unstable();
    other.sort_unstable();
    Bipartition::Sides(Sides {
        own: own.into_iter().map(|(v, _)| v).collect(),
        other: other.into_iter().map(|(v, _)| v).collect(),
    })
}

/// Two-colors the component of `of` inside the subgraph induced by
/// `restrict`, with `of` on the `own` side.
pub fn bipartition(
    g: &Graph,
    of: Vertex,
    restrict: &VertexMask,
) -> Result<Bipartition, GraphError> {
    g.check_vertex(of)?;
    if !restrict.contains(of) {
        return Err(GraphError::NotInRestriction(of));
    }
    Ok(bipartition_where(g, of, |v| restrict.contains(v)))
}
