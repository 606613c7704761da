use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("line {line}: expected {expected}, found `{found}`")]
    Malformed {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn parse_pair(line_no: usize, line: &str, expected: &'static str) -> Result<(usize, usize), ParseError> {
    let malformed = || ParseError::Malformed {
        line: line_no,
        expected,
        found: line.to_string(),
    };
    let mut it = line.split_whitespace();
    let a = it.next().and_then(|t| t.parse().ok()).ok_or_else(malformed)?;
    let b = it.next().and_then(|t| t.parse().ok()).ok_or_else(malformed)?;
    if it.next().is_some() {
        return Err(malformed());
    }
    Ok((a, b))
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v` with
/// 0-based ids. Anything after `#` on a line is ignored, as are blank lines.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (n, m) = parse_pair(hline, header, "header `n m`")?;
    let mut g = Graph::empty(n);
    let mut found = 0;
    for (line, text) in lines {
        let (u, v) = parse_pair(line, text, "edge `u v`")?;
        match g.add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => {
                return Err(ParseError::Graph {
                    line,
                    source: GraphError::DuplicateEdge(u.min(v), u.max(v)),
                })
            }
            Err(source) => return Err(ParseError::Graph { line, source }),
        }
        found += 1;
    }
    if found != m {
        return Err(ParseError::EdgeCount { declared: m, found });
    }
    Ok(g)
}

/// Writes `g` in the edge-list format, edges as `u v` with `u < v` in
/// lexicographic order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
