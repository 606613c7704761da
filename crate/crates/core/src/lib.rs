//! Online coloring of graphs with high girth or high oddgirth: a replay
//! engine that enforces the online contract, the coloring algorithms, and a
//! verifier that re-derives their invariants from traces.

pub mod algorithms;
pub mod engine;
pub mod generators;
pub mod graph;
pub mod sweep;
pub mod verify;
