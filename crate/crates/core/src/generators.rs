//! Instance families and vertex orders. Every function is a pure function
//! of its spec; randomness comes from a `ChaCha8Rng` seeded per call.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::AlgSpec;
use crate::engine::{replay, OnlineInstance};
use crate::graph::{named, Graph, Vertex, VertexOrder};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("bad family spec `{spec}`: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("{family} needs n >= {min}, got {n}")]
    TooSmall { family: &'static str, min: usize, n: usize },
    #[error("stalled at {edges}/{target} edges after {attempts} consecutive rejections")]
    Stall {
        edges: usize,
        target: usize,
        attempts: usize,
        partial: Graph,
    },
}

impl GenError {
    /// The partially built graph of a stalled run.
    pub fn into_partial(self) -> Result<Graph, GenError> {
        match self {
            GenError::Stall { partial, .. } => Ok(partial),
            other => Err(other),
        }
    }
}

/// Seed graph for [`Family::Subdivision`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Core {
    C3,
    C5,
    C7,
    K4,
    Petersen,
    /// `G(n, p)` on the spec's `n` core vertices.
    Random { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Cycle,
    Path,
    /// Uniform random recursive tree.
    Tree,
    /// `K_{a, n-a}`; `a` defaults to `n / 2`.
    CompleteBipartite { a: Option<usize> },
    /// Sides `n/2` and `n - n/2`, each cross pair an edge with probability `p`.
    RandomBipartite { p: f64 },
    /// Rejection sampling: random non-edges are kept only if they close no
    /// cycle shorter than `g_min`. Stops at `m` edges.
    RandomGirthConstrained { g_min: usize, m: usize },
    /// Every edge of `core` replaced by a path of `t` edges.
    Subdivision { core: Core, t: usize },
    /// Disjoint copies of the tree on which First Fit in post-order is forced
    /// to color the root `k`, with consecutive roots joined by an edge when
    /// `link`. Vertex ids follow post-order, so the natural order forces.
    ForcingTree { k: usize, link: bool },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Tree => "tree",
            Family::CompleteBipartite { .. } => "complete-bipartite",
            Family::RandomBipartite { .. } => "random-bipartite",
            Family::RandomGirthConstrained { .. } => "random-girth-constrained",
            Family::Subdivision { .. } => "subdivision",
            Family::ForcingTree { .. } => "forcing-tree",
        }
    }
}

fn bad(spec: &str, reason: impl Into<String>) -> GenError {
    GenError::BadSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

/// Parses `name` or `name:key=value,key=value`, e.g.
/// `random-girth-constrained:g_min=9,m=60` or `subdivision:core=c5,t=5`.
impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(s, format!("`{kv}` is not key=value")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| params.remove(key);
        fn num<T: FromStr>(s: &str, key: &str, v: Option<String>, default: T) -> Result<T, GenError> {
            match v {
                None => Ok(default),
                Some(v) => v.parse().map_err(|_| bad(s, format!("bad value for {key}: `{v}`"))),
            }
        }
        let fam = match name {
            "cycle" => Family::Cycle,
            "path" => Family::Path,
            "tree" => Family::Tree,
            "complete-bipartite" => Family::CompleteBipartite {
                a: take("a").map(|v| v.parse().map_err(|_| bad(s, "bad value for a"))).transpose()?,
            },
            "random-bipartite" => Family::RandomBipartite {
                p: num(s, "p", take("p"), 0.1)?,
            },
            "random-girth-constrained" => Family::RandomGirthConstrained {
                g_min: num(s, "g_min", take("g_min"), 5)?,
                m: num(s, "m", take("m"), 0)?,
            },
            "subdivision" => {
                let core = match take("core").as_deref().unwrap_or("c5") {
                    "c3" => Core::C3,
                    "c5" => Core::C5,
                    "c7" => Core::C7,
                    "k4" => Core::K4,
                    "petersen" => Core::Petersen,
                    "random" => Core::Random {
                        p: num(s, "p", take("p"), 0.3)?,
                    },
                    other => return Err(bad(s, format!("unknown core `{other}`"))),
                };
                Family::Subdivision {
                    core,
                    t: num(s, "t", take("t"), 3)?,
                }
            }
            "forcing-tree" => Family::ForcingTree {
                k: num(s, "k", take("k"), 4)?,
                link: num(s, "link", take("link"), true)?,
            },
            other => return Err(bad(s, format!("unknown family `{other}`"))),
        };
        if let Some(k) = params.keys().next() {
            return Err(bad(s, format!("unknown parameter `{k}`")));
        }
        Ok(fam)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            Family::CompleteBipartite { a: Some(a) } => write!(f, ":a={a}"),
            Family::RandomBipartite { p } => write!(f, ":p={p}"),
            Family::RandomGirthConstrained { g_min, m } => write!(f, ":g_min={g_min},m={m}"),
            Family::Subdivision { core, t } => {
                let name = match core {
                    Core::C3 => "c3".to_string(),
                    Core::C5 => "c5".to_string(),
                    Core::C7 => "c7".to_string(),
                    Core::K4 => "k4".to_string(),
                    Core::Petersen => "petersen".to_string(),
                    Core::Random { p } => format!("random,p={p}"),
                };
                write!(f, ":core={name},t={t}")
            }
            Family::ForcingTree { k, link } => write!(f, ":k={k},link={link}"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenSpec { family, n, seed }
    }
}

/// Builds the instance described by `spec`. For `subdivision` with a named
/// core, `n` is ignored; for a random core it is the core's vertex count.
pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let need = |min: usize| {
        if n < min {
            Err(GenError::TooSmall {
                family: spec.family.name(),
                min,
                n,
            })
        } else {
            Ok(())
        }
    };
    match spec.family {
        Family::Cycle => {
            need(3)?;
            Ok(named::cycle(n))
        }
        Family::Path => {
            need(1)?;
            Ok(named::path(n))
        }
        Family::Tree => {
            need(1)?;
            let mut g = Graph::empty(n);
            for v in 1..n {
                let parent = rng.gen_range(0..v);
                g.add_edge(parent, v).expect("tree edge is new");
            }
            Ok(g)
        }
        Family::CompleteBipartite { a } => {
            need(1)?;
            let a = a.unwrap_or(n / 2);
            if a > n {
                return Err(bad(&spec.family.to_string(), format!("a = {a} exceeds n = {n}")));
            }
            Ok(named::complete_bipartite(a, n - a))
        }
        Family::RandomBipartite { p } => {
            need(1)?;
            check_probability(spec, p)?;
            let a = n / 2;
            let mut g = Graph::empty(n);
            for u in 0..a {
                for v in a..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v).expect("pair visited once");
                    }
                }
            }
            Ok(g)
        }
        Family::RandomGirthConstrained { g_min, m } => {
            need(1)?;
            if g_min < 3 {
                return Err(bad(&spec.family.to_string(), "g_min must be at least 3"));
            }
            girth_constrained(n, g_min, m, &mut rng)
        }
        Family::Subdivision { core, t } => {
            if t == 0 {
                return Err(bad(&spec.family.to_string(), "t must be at least 1"));
            }
            let base = match core {
                Core::C3 => named::cycle(3),
                Core::C5 => named::cycle(5),
                Core::C7 => named::cycle(7),
                Core::K4 => named::complete(4),
                Core::Petersen => named::petersen(),
                Core::Random { p } => {
                    need(1)?;
                    check_probability(spec, p)?;
                    let mut g = Graph::empty(n);
                    for u in 0..n {
                        for v in u + 1..n {
                            if rng.gen_bool(p) {
                                g.add_edge(u, v).expect("pair visited once");
                            }
                        }
                    }
                    g
                }
            };
            Ok(subdivide(&base, t))
        }
        Family::ForcingTree { k, link } => {
            if k == 0 {
                return Err(bad(&spec.family.to_string(), "k must be at least 1"));
            }
            need(1)?;
            Ok(forcing_forest(n, k, link))
        }
    }
}

fn check_probability(spec: &GenSpec, p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(bad(&spec.family.to_string(), format!("p = {p} is not a probability")))
    }
}

/// Replaces each edge by a path with `t` edges. Cycle lengths scale by `t`.
pub fn subdivide(g: &Graph, t: usize) -> Graph {
    let mut out = Graph::empty(g.n());
    for (u, v) in g.edges() {
        let mut prev = u;
        for _ in 1..t {
            let w = out.add_vertex();
            out.add_edge(prev, w).expect("fresh vertex");
            prev = w;
        }
        out.add_edge(prev, v).expect("fresh path end");
    }
    out
}

/// True when `u` and `v` are joined by a path of at most `limit` edges.
fn within(g: &Graph, u: Vertex, v: Vertex, limit: usize) -> bool {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([u]);
    dist[u] = 0;
    while let Some(x) = queue.pop_front() {
        if dist[x] == limit {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                if y == v {
                    return true;
                }
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    false
}

fn girth_constrained(n: usize, g_min: usize, target: usize, rng: &mut ChaCha8Rng) -> Result<Graph, GenError> {
    let mut g = Graph::empty(n);
    let max_edges = n * n.saturating_sub(1) / 2;
    let stall = 50 * n;
    let mut rejected = 0;
    while g.m() < target {
        if rejected >= stall || g.m() == max_edges {
            return Err(GenError::Stall {
                edges: g.m(),
                target,
                attempts: rejected,
                partial: g,
            });
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        // A new edge u-v closes cycles of length dist(u, v) + 1, so any path
        // of at most g_min - 2 edges rules it out.
        if u == v || g.has_edge(u, v) || within(&g, u, v, g_min - 2) {
            rejected += 1;
            continue;
        }
        g.add_edge(u, v).expect("checked non-edge");
        rejected = 0;
    }
    Ok(g)
}

/// Tree on which First Fit, fed in post-order, colors the root `k`: the root's
/// children are roots of the same trees for `1..k`. Has `2^(k-1)` vertices.
fn forcing_tree(g: &mut Graph, k: usize) -> Vertex {
    let children: Vec<Vertex> = (1..k).map(|j| forcing_tree(g, j)).collect();
    let root = g.add_vertex();
    for c in children {
        g.add_edge(c, root).expect("fresh root");
    }
    root
}

fn forcing_forest(n: usize, k: usize, link: bool) -> Graph {
    let size = 1usize << (k - 1).min(usize::BITS as usize - 2);
    let mut g = Graph::empty(0);
    let mut prev_root = None;
    while g.n() + size <= n {
        let root = forcing_tree(&mut g, k);
        if let (true, Some(p)) = (link, prev_root) {
            g.add_edge(p, root).expect("roots of distinct copies");
        }
        prev_root = Some(root);
    }
    while g.n() < n {
        g.add_vertex();
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Natural,
    Random,
    Bfs,
    Dfs,
    DegreeDesc,
    AdversarialSearch,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Natural => "natural",
            Strategy::Random => "random",
            Strategy::Bfs => "bfs",
            Strategy::Dfs => "dfs",
            Strategy::DegreeDesc => "degree-desc",
            Strategy::AdversarialSearch => "adversarial-search",
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "natural" => Strategy::Natural,
            "random" => Strategy::Random,
            "bfs" => Strategy::Bfs,
            "dfs" => Strategy::Dfs,
            "degree-desc" => Strategy::DegreeDesc,
            "adversarial-search" => Strategy::AdversarialSearch,
            other => return Err(format!("unknown order strategy `{other}`")),
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpec {
    pub strategy: Strategy,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub restarts: usize,
}

fn one() -> usize {
    1
}

impl OrderSpec {
    pub fn new(strategy: Strategy, seed: u64) -> Self {
        OrderSpec {
            strategy,
            seed,
            restarts: 1,
        }
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts.max(1);
        self
    }
}

/// Arrival order for `g`. `alg` is consulted only by adversarial search,
/// which keeps the random order (of `restarts`) on which `alg` used the
/// most colors; without `alg` it falls back to First Fit.
pub fn order(g: &Graph, spec: &OrderSpec, alg: Option<&AlgSpec>) -> VertexOrder {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let perm = match spec.strategy {
        Strategy::Natural => (0..n).collect(),
        Strategy::Random => shuffled(n, &mut rng),
        Strategy::Bfs => traverse(g, false),
        Strategy::Dfs => traverse(g, true),
        Strategy::DegreeDesc => {
            let mut p: Vec<Vertex> = (0..n).collect();
            p.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
            p
        }
        Strategy::AdversarialSearch => {
            let alg = alg.copied().unwrap_or(AlgSpec::new(crate::algorithms::AlgKind::Ff, 1));
            let mut best: Option<(u32, Vec<Vertex>)> = None;
            for _ in 0..spec.restarts.max(1) {
                let p = shuffled(n, &mut rng);
                let ord = VertexOrder::new(p.clone()).expect("shuffle is a permutation");
                let inst = OnlineInstance::new(g, &ord).expect("sizes agree");
                // Orders on which the algorithm aborts are not candidates.
                let Ok(trace) = replay(inst, &alg) else { continue };
                if best.as_ref().is_none_or(|(c, _)| trace.colors_used > *c) {
                    best = Some((trace.colors_used, p));
                }
            }
            best.map(|(_, p)| p).unwrap_or_else(|| (0..n).collect())
        }
    };
    VertexOrder::new(perm).expect("strategies yield permutations")
}

fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    let mut p: Vec<Vertex> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// BFS or DFS (preorder, least neighbor first) from vertex 0, restarting at
/// the least unvisited vertex for each further component.
fn traverse(g: &Graph, depth_first: bool) -> Vec<Vertex> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        if depth_first {
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                out.push(v);
                stack.extend(g.neighbors(v).iter().rev().filter(|&&u| !seen[u]));
            }
        } else {
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                out.push(v);
                for &u in g.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    out
}
