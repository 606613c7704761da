use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices; exhaustive search is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
}

const CHROMATIC_LIMIT: usize = 12;
const CYCLE_VERTEX_LIMIT: usize = 10;
const CYCLE_LENGTH_LIMIT: usize = 12;

/// Exact chromatic number by backtracking over k-colorings, `n <= 12`.
pub fn oracle_chromatic(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    if n > CHROMATIC_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: CHROMATIC_LIMIT,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut by_degree: Vec<Vertex> = (0..n).collect();
    by_degree.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    (1..=n)
        .find(|&k| {
            let mut colors = vec![0usize; n];
            colorable(g, &by_degree, 0, k, &mut colors)
        })
        .ok_or(OracleError::TooLarge { n, limit: n })
}

fn colorable(g: &Graph, order: &[Vertex], i: usize, k: usize, colors: &mut [usize]) -> bool {
    let Some(&v) = order.get(i) else {
        return true;
    };
    // Symmetry breaking: never open more than one new color at a time.
    let opened = order[..i].iter().map(|&u| colors[u]).max().unwrap_or(0);
    for c in 1..=k.min(opened + 1) {
        if g.neighbors(v).iter().all(|&u| colors[u] != c) {
            colors[v] = c;
            if colorable(g, order, i + 1, k, colors) {
                return true;
            }
            colors[v] = 0;
        }
    }
    false
}

/// Shortest cycle and shortest odd cycle found by enumerating simple cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleLengths {
    pub shortest: Option<usize>,
    pub shortest_odd: Option<usize>,
}

/// Enumerates every simple cycle of length at most `max_len` by DFS from
/// its least vertex. Requires `n <= 10` or `max_len <= 12`.
pub fn oracle_cycles(g: &Graph, max_len: usize) -> Result<CycleLengths, OracleError> {
    let n = g.n();
    if n > CYCLE_VERTEX_LIMIT && max_len > CYCLE_LENGTH_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: CYCLE_VERTEX_LIMIT,
        });
    }
    let mut out = CycleLengths {
        shortest: None,
        shortest_odd: None,
    };
    let mut on_path = vec![false; n];
    for start in 0..n {
        on_path[start] = true;
        extend(g, start, start, 1, max_len, &mut on_path, &mut out);
        on_path[start] = false;
    }
    Ok(out)
}

fn extend(
    g: &Graph,
    start: Vertex,
    at: Vertex,
    path_len: usize,
    max_len: usize,
    on_path: &mut [bool],
    out: &mut CycleLengths,
) {
    for &next in g.neighbors(at) {
        if next == start && path_len >= 3 {
            let len = path_len;
            out.shortest = Some(out.shortest.map_or(len, |s| s.min(len)));
            if len % 2 == 1 {
                out.shortest_odd = Some(out.shortest_odd.map_or(len, |s| s.min(len)));
            }
        } else if next > start && !on_path[next] && path_len < max_len {
            on_path[next] = true;
            extend(g, start, next, path_len + 1, max_len, on_path, out);
            on_path[next] = false;
        }
    }
}
