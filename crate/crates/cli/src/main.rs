//! `oncolor`: generate instances, replay online coloring algorithms on them,
//! verify the resulting traces and run parameter sweeps.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 bad input, 3 the input violates
//! the algorithm's precondition (only without `--robust`).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oncolor_core::algorithms::{offline_bipartite_finish, AlgKind, AlgSpec};
use oncolor_core::engine::{replay, ColoringTrace, OnlineInstance, ReplayError};
use oncolor_core::generators::{generate, order, Family, GenError, GenSpec, OrderSpec, Strategy};
use oncolor_core::graph::{parse_edge_list, write_edge_list, Graph, VertexOrder};
use oncolor_core::sweep::{run_sweep, write_csv, SweepSpec};
use oncolor_core::verify::{bound_offline, check_trace, check_trace_with, color_bound, Precondition};

#[derive(Parser)]
#[command(name = "oncolor", version, about = "Online coloring of graphs with high girth and oddgirth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Write an arrival order for a graph as one line of vertex ids.
    Order(OrderArgs),
    /// Replay an algorithm on a graph and verify the run.
    Run(RunArgs),
    /// Verify a saved trace.
    Check(CheckArgs),
    /// Run a grid of experiments described by a TOML file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Family name, optionally with parameters: `subdivision:core=c5,t=5`.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, env = "ONCOLOR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    core: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    g_min: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    /// Keep the partial graph when the girth-constrained generator stalls.
    #[arg(long)]
    partial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrderFlags {
    /// natural, random, bfs, dfs, degree-desc or adversarial-search.
    #[arg(long, default_value = "natural")]
    strategy: Strategy,
    #[arg(long = "order-seed", env = "ONCOLOR_SEED", default_value_t = 0)]
    seed: u64,
    /// Random orders tried by adversarial search.
    #[arg(long, default_value_t = 20)]
    restarts: usize,
}

#[derive(Args)]
struct OrderArgs {
    graph: PathBuf,
    #[command(flatten)]
    order: OrderFlags,
    /// Algorithm adversarial search plays against.
    #[arg(long, default_value = "ff")]
    alg: String,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    graph: PathBuf,
    /// ff, a, bnd, bo, bo-offline, optionally with `-robust` or `-unknown-n`.
    #[arg(long)]
    alg: String,
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Order file; without it the order comes from `--strategy`.
    #[arg(long)]
    order_file: Option<PathBuf>,
    #[command(flatten)]
    order: OrderFlags,
    #[arg(long)]
    robust: bool,
    #[arg(long)]
    unknown_n: bool,
    /// Write the full trace as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    trace: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// A failure and the exit code it maps to.
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn check(msg: impl Into<String>) -> Self {
        Fail { code: 1, msg: msg.into() }
    }
    fn input(msg: impl ToString) -> Self {
        Fail { code: 2, msg: msg.to_string() }
    }
    fn precondition(msg: impl Into<String>) -> Self {
        Fail { code: 3, msg: msg.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Order(a) => cmd_order(a),
        Command::Run(a) => cmd_run(a),
        Command::Check(a) => cmd_check(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Fail> {
    parse_edge_list(&read(path)?).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn family_string(a: &GenArgs) -> String {
    let mut params = Vec::new();
    if let Some(c) = &a.core {
        params.push(format!("core={c}"));
    }
    let numbers = [("t", a.t), ("g_min", a.g_min), ("m", a.m), ("k", a.k), ("a", a.a)];
    for (key, value) in numbers {
        if let Some(v) = value {
            params.push(format!("{key}={v}"));
        }
    }
    if let Some(p) = a.p {
        params.push(format!("p={p}"));
    }
    if params.is_empty() {
        a.family.clone()
    } else if a.family.contains(':') {
        format!("{},{}", a.family, params.join(","))
    } else {
        format!("{}:{}", a.family, params.join(","))
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Fail> {
    let family: Family = family_string(&a).parse().map_err(Fail::input)?;
    let spec = GenSpec::new(family, a.n, a.seed);
    let g = match generate(&spec) {
        Ok(g) => g,
        Err(e @ GenError::Stall { .. }) if a.partial => {
            eprintln!("warning: {e}");
            e.into_partial().map_err(Fail::input)?
        }
        Err(e) => return Err(Fail::input(e)),
    };
    emit(a.out.as_deref(), &write_edge_list(&g))
}

fn alg_spec(id: &str, d: u32, robust: bool, unknown_n: bool) -> Result<AlgSpec, Fail> {
    let mut spec = AlgSpec::from_id(id, d).map_err(Fail::input)?;
    if robust {
        spec = spec.robust();
    }
    if unknown_n {
        spec = spec.unknown_n();
    }
    spec.validate().map_err(Fail::input)?;
    Ok(spec)
}

fn make_order(g: &Graph, flags: &OrderFlags, alg: &AlgSpec) -> VertexOrder {
    let spec = OrderSpec::new(flags.strategy, flags.seed).restarts(flags.restarts);
    order(g, &spec, Some(alg))
}

fn cmd_order(a: OrderArgs) -> Result<(), Fail> {
    let g = read_graph(&a.graph)?;
    let alg = alg_spec(&a.alg, a.d, false, false)?;
    let ord = make_order(&g, &a.order, &alg);
    let ids: Vec<String> = ord.as_slice().iter().map(ToString::to_string).collect();
    emit(a.out.as_deref(), &format!("{}\n", ids.join(" ")))
}

fn read_order(path: &Path, n: usize) -> Result<VertexOrder, Fail> {
    let perm = read(path)?
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    if perm.len() != n {
        return Err(Fail::input(format!(
            "{}: order has {} entries, graph has {n} vertices",
            path.display(),
            perm.len()
        )));
    }
    VertexOrder::new(perm).map_err(Fail::input)
}

fn cmd_run(a: RunArgs) -> Result<(), Fail> {
    let g = read_graph(&a.graph)?;
    let spec = alg_spec(&a.alg, a.d, a.robust, a.unknown_n)?;
    let pre = Precondition::for_alg(&spec);
    if !spec.robust && !pre.holds(&g) {
        return Err(Fail::precondition(format!(
            "{} needs {}; rerun with --robust to color it anyway",
            spec.id(),
            pre.describe()
        )));
    }
    let ord = match &a.order_file {
        Some(p) => read_order(p, g.n())?,
        None => make_order(&g, &a.order, &spec),
    };
    let inst = OnlineInstance::new(&g, &ord).map_err(Fail::input)?;
    let trace = match replay(inst, &spec) {
        Ok(t) => t,
        Err(ReplayError::AssumptionViolated { step, vertex, reason, .. }) => {
            return Err(Fail::precondition(format!("step {step}, vertex {vertex}: {reason}")))
        }
        Err(ReplayError::Params(e)) => return Err(Fail::input(e)),
    };
    if let Some(p) = &a.trace {
        emit(Some(p), &trace.to_json())?;
    }
    let report = check_trace_with(&trace, &spec, &g);
    let (colors, bound) = summary(&trace, &spec, &g);
    println!(
        "alg={} n={} colors={colors} bound={bound:.3} ok={}",
        spec.id(),
        g.n(),
        report.overall
    );
    if report.overall {
        Ok(())
    } else {
        Err(Fail::check(format!("failed checks: {}", report.failed().join(" "))))
    }
}

/// Colors and bound for the summary line. The offline variant is judged
/// after its two-coloring finish.
fn summary(trace: &ColoringTrace, spec: &AlgSpec, g: &Graph) -> (u32, f64) {
    if spec.kind == AlgKind::BoOffline && !spec.unknown_n {
        let colors = offline_bipartite_finish(trace, g).map_or(trace.colors_used, |c| c.max_color());
        (colors, bound_offline(g.n(), spec.d))
    } else {
        (trace.colors_used, color_bound(spec, g).bound)
    }
}

fn cmd_check(a: CheckArgs) -> Result<(), Fail> {
    let trace = ColoringTrace::from_json(&read(&a.trace)?).map_err(Fail::input)?;
    let report = check_trace(&trace).map_err(Fail::input)?;
    if a.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    if report.overall {
        Ok(())
    } else {
        Err(Fail::check(""))
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Fail> {
    let spec: SweepSpec = toml::from_str(&read(&a.spec)?).map_err(|e| Fail::input(format!("{}: {e}", a.spec.display())))?;
    let rows = run_sweep(&spec, a.jobs).map_err(Fail::input)?;
    let file = fs::File::create(&a.out).map_err(|e| Fail::input(format!("{}: {e}", a.out.display())))?;
    write_csv(&rows, file).map_err(Fail::input)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    eprintln!("{} rows, {failed} failed", rows.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Fail::check(format!("{failed} rows failed")))
    }
}
