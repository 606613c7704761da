//! Grid experiments: every (instance, order, algorithm) combination is
//! replayed and checked independently, in parallel, and reported as one CSV
//! row. Row order depends only on the spec.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{offline_bipartite_finish, AlgError, AlgKind, AlgSpec};
use crate::engine::{replay, OnlineInstance, ReplayError};
use crate::generators::{generate, order, Family, GenError, GenSpec, OrderSpec, Strategy};
use crate::graph::{girth, oddgirth};
use crate::verify::{bound_offline, check_trace_with, color_bound};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Family strings as accepted by [`Family::from_str`](std::str::FromStr).
    pub families: Vec<String>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub orders: Vec<Strategy>,
    /// Algorithm ids, e.g. `bnd`, `bo-robust`, `a-unknown-n`.
    pub algs: Vec<String>,
    /// Radii tried for algorithms that take one; others run once with d = 0.
    #[serde(default)]
    pub d: Vec<u32>,
    /// Restarts for adversarial-search orders.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
}

fn default_restarts() -> usize {
    20
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep grid is empty: no {0}")]
    EmptyGrid(&'static str),
    #[error(transparent)]
    Family(#[from] GenError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One CSV row. `n` and `m` describe the generated graph, which for some
/// families differs from the requested size `size`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub family: String,
    pub size: usize,
    pub seed: u64,
    pub order: Strategy,
    pub alg: String,
    pub d: u32,
    pub n: usize,
    pub m: usize,
    pub girth: String,
    pub oddgirth: String,
    pub colors: u32,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    pub error: String,
    pub wall_ms: u64,
}

#[derive(Debug, Clone)]
struct Job {
    family: Family,
    size: usize,
    seed: u64,
    order: Strategy,
    alg: AlgSpec,
}

impl SweepSpec {
    /// Validates every parameter and expands the grid, sorted by key.
    fn jobs(&self) -> Result<Vec<Job>, SweepError> {
        for (empty, what) in [
            (self.families.is_empty(), "families"),
            (self.sizes.is_empty(), "sizes"),
            (self.seeds.is_empty(), "seeds"),
            (self.orders.is_empty(), "orders"),
            (self.algs.is_empty(), "algs"),
        ] {
            if empty {
                return Err(SweepError::EmptyGrid(what));
            }
        }
        let families = self
            .families
            .iter()
            .map(|f| f.parse::<Family>())
            .collect::<Result<Vec<_>, _>>()?;
        let mut algs = Vec::new();
        for id in &self.algs {
            let probe = AlgSpec::from_id(id, 0)?;
            if probe.kind.uses_d() {
                if self.d.is_empty() {
                    return Err(SweepError::EmptyGrid("d values"));
                }
                for &d in &self.d {
                    let spec = AlgSpec::from_id(id, d)?;
                    spec.validate()?;
                    algs.push(spec);
                }
            } else {
                algs.push(probe);
            }
        }
        let mut jobs = Vec::new();
        for family in &families {
            for &size in &self.sizes {
                for &seed in &self.seeds {
                    for &order in &self.orders {
                        for &alg in &algs {
                            jobs.push(Job {
                                family: *family,
                                size,
                                seed,
                                order,
                                alg,
                            });
                        }
                    }
                }
            }
        }
        jobs.sort_by(|a, b| {
            (a.family.to_string(), a.size, a.seed, a.order, a.alg.id(), a.alg.d).cmp(&(
                b.family.to_string(),
                b.size,
                b.seed,
                b.order,
                b.alg.id(),
                b.alg.d,
            ))
        });
        Ok(jobs)
    }
}

/// Runs the whole grid on `jobs` worker threads (0 = rayon's default).
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<Row>, SweepError> {
    let grid = spec.jobs()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let restarts = spec.restarts;
    Ok(pool.install(|| grid.par_iter().map(|job| run_job(job, restarts)).collect()))
}

fn run_job(job: &Job, restarts: usize) -> Row {
    let start = Instant::now();
    let mut row = Row {
        family: job.family.to_string(),
        size: job.size,
        seed: job.seed,
        order: job.order,
        alg: job.alg.id(),
        d: job.alg.d,
        n: 0,
        m: 0,
        girth: String::new(),
        oddgirth: String::new(),
        colors: 0,
        bound: 0.0,
        slack: 0.0,
        pass: false,
        error: String::new(),
        wall_ms: 0,
    };
    // A stalled constrained generator still yields a valid (sparser) graph.
    let g = match generate(&GenSpec::new(job.family, job.size, job.seed)).or_else(GenError::into_partial) {
        Ok(g) => g,
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    };
    row.n = g.n();
    row.m = g.m();
    row.girth = girth(&g).to_string();
    row.oddgirth = oddgirth(&g).to_string();

    let offline = job.alg.kind == AlgKind::BoOffline && !job.alg.unknown_n;
    let b = color_bound(&job.alg, &g);
    row.bound = if offline {
        bound_offline(g.n(), job.alg.d)
    } else {
        b.bound
    };
    row.slack = b.slack;

    let ord = order(&g, &OrderSpec::new(job.order, job.seed).restarts(restarts), Some(&job.alg));
    let inst = OnlineInstance::new(&g, &ord).expect("order covers the graph");
    match replay(inst, &job.alg) {
        Ok(trace) => {
            let report = check_trace_with(&trace, &job.alg, &g);
            row.colors = trace.colors_used;
            if offline {
                if let Ok(c) = offline_bipartite_finish(&trace, &g) {
                    row.colors = c.max_color();
                }
            }
            row.pass = report.overall;
            if !row.pass {
                row.error = format!("failed: {}", report.failed().join(" "));
            }
        }
        Err(ReplayError::AssumptionViolated {
            step, vertex, reason, ..
        }) => {
            row.error = format!("step {step} vertex {vertex}: {reason}");
        }
        Err(ReplayError::Params(e)) => row.error = e.to_string(),
    }
    row.wall_ms = start.elapsed().as_millis() as u64;
    row
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), SweepError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
