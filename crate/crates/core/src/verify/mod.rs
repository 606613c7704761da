//! Bound formulas, proof-invariant checks over traces, and exhaustive
//! oracles for small graphs.

pub mod bounds;
mod check;
mod oracle;
mod report;

pub use bounds::{bound_a, bound_bnd, bound_bo, bound_offline, color_bound, BoundCheck, Precondition};
pub use check::{check_trace, check_trace_with, growth_radius};
pub use oracle::{oracle_chromatic, oracle_cycles, CycleLengths, OracleError};
pub use report::{CheckResult, Report, Status};
