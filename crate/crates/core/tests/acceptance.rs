//! Acceptance gate. Runs every criterion, prints one line each, and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use oncolor_core::algorithms::{a_palette_cap, AlgKind, AlgSpec};
use oncolor_core::engine::{replay, ColoringTrace, OnlineInstance};
use oncolor_core::generators::{order, OrderSpec, Strategy};
use oncolor_core::graph::{girth, is_proper, named, oddgirth, Girth, Graph, OddGirth};
use oncolor_core::sweep::{run_sweep, write_csv, SweepSpec};
use oncolor_core::verify::{
    check_trace, check_trace_with, oracle_chromatic, oracle_cycles, Report, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{arbitrary, bipartite, fault_fixtures, girth_at_least, oddgirth_at_least, orders, Instance};

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, summary },
        Some(f) => Outcome {
            pass: false,
            summary: format!("{summary}; {} failure(s), first: {f}", failures.len()),
        },
    }
}

/// One replay plus its report. `error` is set when the replay aborted.
struct Run {
    spec: AlgSpec,
    label: String,
    trace: Option<ColoringTrace>,
    report: Option<Report>,
    error: Option<String>,
}

impl Run {
    fn status(&self, check: &str) -> Option<Status> {
        self.report.as_ref().and_then(|r| r.status(check))
    }

    fn proper(&self) -> bool {
        let Some(t) = &self.trace else { return false };
        let g = t.graph().unwrap();
        is_proper(&g, &t.coloring()).unwrap().is_proper()
    }

    fn describe(&self) -> String {
        format!("{} on {}", self.spec, self.label)
    }
}

fn run_corpus(spec: AlgSpec, corpus: &[Instance], random_orders: u64) -> Vec<Run> {
    corpus
        .par_iter()
        .flat_map(|inst| {
            orders(&inst.graph, random_orders)
                .into_par_iter()
                .map(move |(name, ord)| {
                    let label = format!("{} [{name}]", inst.label);
                    match replay(OnlineInstance::new(&inst.graph, &ord).unwrap(), &spec) {
                        Ok(t) => {
                            let report = check_trace_with(&t, &spec, &inst.graph);
                            Run { spec, label, trace: Some(t), report: Some(report), error: None }
                        }
                        Err(e) => Run { spec, label, trace: None, report: None, error: Some(e.to_string()) },
                    }
                })
        })
        .collect()
}

struct Corpora {
    ff: Vec<Run>,
    a: Vec<Run>,
    bnd: Vec<Run>,
    bo: Vec<Run>,
}

fn timed<T>(what: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    println!("  {what}: {:.1}s", t.elapsed().as_secs_f64());
    out
}

fn build_corpora() -> Corpora {
    let ff = timed("ff", || run_corpus(AlgSpec::new(AlgKind::Ff, 1), &arbitrary(), 16));
    let a = timed("a", || run_corpus(AlgSpec::new(AlgKind::A, 1), &bipartite(), 12));
    let mut bnd = Vec::new();
    for d in [1, 2, 3] {
        bnd.extend(timed(&format!("bnd d={d}"), || run_corpus(AlgSpec::new(AlgKind::Bnd, d), &girth_at_least(4 * d as usize + 1), 14)));
    }
    let mut bo = Vec::new();
    for d in [2, 4, 8] {
        bo.extend(timed(&format!("bo d={d}"), || run_corpus(AlgSpec::new(AlgKind::Bo, d), &oddgirth_at_least(4 * d as usize + 1), 14)));
    }
    Corpora { ff, a, bnd, bo }
}

fn count_by_spec(runs: &[Run]) -> Vec<(AlgSpec, usize)> {
    let mut out: Vec<(AlgSpec, usize)> = Vec::new();
    for r in runs {
        match out.iter_mut().find(|(s, _)| *s == r.spec) {
            Some((_, c)) => *c += 1,
            None => out.push((r.spec, 1)),
        }
    }
    out
}

fn criterion_1(c: &Corpora) -> Outcome {
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for runs in [&c.ff, &c.a, &c.bnd, &c.bo] {
        for r in runs.iter() {
            if let Some(e) = &r.error {
                failures.push(format!("{} aborted: {e}", r.describe()));
            } else if !r.proper() {
                failures.push(format!("{} improper", r.describe()));
            }
        }
        for (spec, n) in count_by_spec(runs) {
            if n < 500 {
                failures.push(format!("{spec}: only {n} pairs"));
            }
            counts.push(format!("{spec}:{n}"));
        }
    }
    outcome(&failures, format!("properness over {}", counts.join(" ")))
}

fn bound_failures(runs: &[Run]) -> (Vec<String>, usize) {
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in runs {
        match r.status("bound") {
            Some(Status::Pass) => checked += 1,
            other => {
                let detail = r
                    .report
                    .as_ref()
                    .and_then(|rep| rep.get("bound"))
                    .map(|c| format!("{:?} vs {:?}+{:?}", c.measured, c.bound, c.slack))
                    .unwrap_or_default();
                failures.push(format!("{}: bound {other:?} {detail}", r.describe()));
            }
        }
    }
    (failures, checked)
}

fn max_ratio(runs: &[Run]) -> f64 {
    runs.iter()
        .filter_map(|r| r.report.as_ref()?.get("bound"))
        .filter_map(|c| Some(c.measured? / c.bound?))
        .fold(0.0, f64::max)
}

fn criterion_2(c: &Corpora) -> Outcome {
    let (failures, checked) = bound_failures(&c.bnd);
    outcome(
        &failures,
        format!("high-girth bound held on {checked} runs (max colors/bound {:.2})", max_ratio(&c.bnd)),
    )
}

fn criterion_3(c: &Corpora) -> Outcome {
    let (failures, checked) = bound_failures(&c.bo);
    outcome(
        &failures,
        format!("odd-girth bound held on {checked} runs (max colors/bound {:.2})", max_ratio(&c.bo)),
    )
}

fn criterion_4(c: &Corpora) -> Outcome {
    let (mut failures, corpus_runs) = bound_failures(&c.a);
    let mut growth_runs = 0;
    for r in &c.a {
        for check in ["side_growth", "side_growth_distance"] {
            match r.status(check) {
                Some(Status::Pass) => growth_runs += usize::from(check == "side_growth_distance"),
                Some(Status::NotApplicable) if check == "side_growth_distance" => {}
                other => failures.push(format!("{}: {check} {other:?}", r.describe())),
            }
        }
    }
    // Adversarial search: 10 instances x 100 restarts per size.
    let alg = AlgSpec::new(AlgKind::A, 1);
    let sizes = [16usize, 64, 256];
    let adv: Vec<String> = sizes
        .par_iter()
        .flat_map(|&n| (0..10u64).into_par_iter().map(move |seed| (n, seed)))
        .filter_map(|(n, seed)| {
            let family = if seed % 2 == 0 { "tree".to_string() } else { format!("random-bipartite:p={}", 4.0 / n as f64) };
            let g = common::gen(&family, n, seed).graph;
            let ord = order(&g, &OrderSpec::new(Strategy::AdversarialSearch, seed).restarts(100), Some(&alg));
            let t = replay(OnlineInstance::new(&g, &ord).unwrap(), &alg).unwrap();
            let cap = a_palette_cap(n) as u32;
            let report = check_trace(&t).unwrap();
            if t.colors_used > cap {
                Some(format!("{family} n={n} seed={seed}: {} colors > {cap}", t.colors_used))
            } else if !report.overall {
                Some(format!("{family} n={n} seed={seed}: failed {:?}", report.failed()))
            } else {
                None
            }
        })
        .collect();
    failures.extend(adv);
    outcome(
        &failures,
        format!(
            "A bound on {corpus_runs} corpus runs and 3000 adversarial orders; side-growth distance form on {growth_runs} runs with n <= 64"
        ),
    )
}

const INVARIANTS: [&str; 14] = [
    "w_disjoint",
    "w_nonempty",
    "w_radius",
    "w_complete",
    "founder_saturation",
    "step2_geometry",
    "w_size",
    "class_count",
    "h_disjoint",
    "h_bipartite",
    "h_block",
    "h_palette",
    "parity",
    "step2_parity",
];

fn criterion_5(c: &Corpora) -> Outcome {
    let mut failures = Vec::new();
    let mut classes = (0, 0);
    for r in c.bnd.iter().chain(&c.bo) {
        let Some(rep) = &r.report else { continue };
        for check in INVARIANTS {
            if let Some(res) = rep.get(check) {
                if res.status != Status::Pass {
                    failures.push(format!(
                        "{}: {check} {} {}",
                        r.describe(),
                        res.status,
                        res.detail.clone().unwrap_or_default()
                    ));
                }
            }
        }
        let opened = r.trace.as_ref().map_or(0, |t| {
            t.steps.iter().filter(|s| s.rule == oncolor_core::engine::Rule::Step3).count()
        });
        if r.spec.kind == AlgKind::Bnd {
            classes.0 += opened;
        } else {
            classes.1 += opened;
        }
    }
    // The structural invariants do not depend on girth, so runs on arbitrary
    // graphs that finish without a clash must satisfy them too. These are
    // where witness classes actually occur at this scale.
    let mut stress = 0;
    let mut stress_classes = 0;
    let graphs = arbitrary();
    for spec in [
        AlgSpec::new(AlgKind::Bnd, 1),
        AlgSpec::new(AlgKind::Bnd, 2),
        AlgSpec::new(AlgKind::Bo, 2),
        AlgSpec::new(AlgKind::Bo, 4),
    ] {
        for r in run_corpus(spec, &graphs, 2) {
            let (Some(t), Some(rep)) = (&r.trace, &r.report) else { continue };
            stress += 1;
            stress_classes += t.steps.iter().filter(|s| s.rule == oncolor_core::engine::Rule::Step3).count();
            for check in INVARIANTS {
                if rep.status(check) == Some(Status::Fail) {
                    failures.push(format!("{}: {check} failed", r.describe()));
                }
            }
        }
    }
    let fixtures = fault_fixtures();
    for f in &fixtures {
        let rep = check_trace(&f.trace).unwrap();
        let failed = rep.failed();
        if !failed.contains(&f.check) || (f.exact && failed != [f.check]) {
            failures.push(format!("fixture {}: failed checks {failed:?}", f.check));
        }
    }
    outcome(
        &failures,
        format!(
            "invariants on {} conforming runs ({} high-girth and {} odd-girth witness classes) and {stress} unconstrained runs ({stress_classes} classes); {} fault fixtures",
            c.bnd.len() + c.bo.len(),
            classes.0,
            classes.1,
            fixtures.len()
        ),
    )
}

fn random_small_graph(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=10);
    let p = rng.gen_range(0.1..0.7);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn agrees_with_oracle(g: &Graph) -> Result<(), String> {
    let truth = oracle_cycles(g, g.n()).unwrap();
    let gi = match girth(g) {
        Girth::Cycle(l) => Some(l),
        Girth::Acyclic => None,
    };
    let og = match oddgirth(g) {
        OddGirth::Odd(l) => Some(l),
        OddGirth::Bipartite => None,
    };
    if (gi, og) == (truth.shortest, truth.shortest_odd) {
        Ok(())
    } else {
        Err(format!("girth/oddgirth {gi:?}/{og:?} but enumeration gives {truth:?}"))
    }
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut corpus_small = 0;
    let corpora = [arbitrary(), bipartite(), girth_at_least(5), oddgirth_at_least(9)];
    for inst in corpora.iter().flatten().filter(|i| i.graph.n() <= 10) {
        corpus_small += 1;
        if let Err(e) = agrees_with_oracle(&inst.graph) {
            failures.push(format!("{}: {e}", inst.label));
        }
    }
    for seed in 0..1000 {
        if let Err(e) = agrees_with_oracle(&random_small_graph(seed)) {
            failures.push(format!("random seed {seed}: {e}"));
        }
    }
    let tree = common::gen("tree", 12, 3).graph;
    for (name, g, want) in [("C5", named::cycle(5), 3), ("Petersen", named::petersen(), 3), ("tree", tree, 2)] {
        let got = oracle_chromatic(&g).unwrap();
        if got != want {
            failures.push(format!("chi({name}) = {got}, expected {want}"));
        }
    }
    outcome(
        &failures,
        format!("girth/oddgirth match enumeration on {corpus_small} corpus graphs and 1000 random graphs; chromatic oracle on C5, Petersen, tree"),
    )
}

fn criterion_7() -> Outcome {
    let runs = run_corpus(AlgSpec::new(AlgKind::Bnd, 1).unknown_n(), &girth_at_least(5), 6);
    let mut failures = Vec::new();
    for r in &runs {
        if let Some(e) = &r.error {
            failures.push(format!("{} aborted: {e}", r.describe()));
        } else if r.status("bound") != Some(Status::Pass) || !r.report.as_ref().unwrap().overall {
            failures.push(format!("{}: failed {:?}", r.describe(), r.report.as_ref().unwrap().failed()));
        }
    }
    outcome(
        &failures,
        format!("unknown-n wrapper within 4f(n) on {} runs (max colors/bound {:.2})", runs.len(), max_ratio(&runs)),
    )
}

fn criterion_8() -> Outcome {
    let mut runs = Vec::new();
    for d in [2u32, 4, 8] {
        runs.extend(run_corpus(AlgSpec::new(AlgKind::BoOffline, d), &oddgirth_at_least(4 * d as usize + 1), 4));
    }
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for r in &runs {
        if let Some(e) = &r.error {
            failures.push(format!("{} aborted: {e}", r.describe()));
            continue;
        }
        for check in ["offline_finish", "offline_bound"] {
            if r.status(check) != Some(Status::Pass) {
                failures.push(format!("{}: {check} {:?}", r.describe(), r.status(check)));
            }
        }
        if let Some(c) = r.report.as_ref().unwrap().get("offline_bound") {
            worst = worst.max(c.measured.unwrap_or(0.0) / c.bound.unwrap_or(1.0));
        }
    }
    outcome(
        &failures,
        format!("offline finish proper and within bound on {} runs (max colors/bound {worst:.2})", runs.len()),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut arbitrary_runs = 0;
    let mut identical = 0;
    let robust_specs = [
        AlgSpec::new(AlgKind::Bnd, 1).robust(),
        AlgSpec::new(AlgKind::Bnd, 2).robust(),
        AlgSpec::new(AlgKind::Bo, 2).robust(),
        AlgSpec::new(AlgKind::Bo, 4).robust(),
    ];
    let mut graphs = arbitrary();
    graphs.push(common::Instance { label: "K3".into(), graph: named::complete(3) });
    graphs.push(common::Instance { label: "K6".into(), graph: named::complete(6) });
    for spec in robust_specs {
        for r in run_corpus(spec, &graphs, 4) {
            arbitrary_runs += 1;
            if r.error.is_some() || !r.proper() {
                failures.push(format!("{}: {:?}", r.describe(), r.error));
            }
        }
        let corpus = match spec.kind {
            AlgKind::Bnd => girth_at_least(4 * spec.d as usize + 1),
            _ => oddgirth_at_least(4 * spec.d as usize + 1),
        };
        let plain = run_corpus(spec.base(), &corpus, 2);
        let robust = run_corpus(spec, &corpus, 2);
        for (p, r) in plain.iter().zip(&robust) {
            match (&p.trace, &r.trace) {
                (Some(a), Some(b)) if a.same_run(b) => identical += 1,
                _ => failures.push(format!("{}: robust and plain runs differ", r.describe())),
            }
        }
    }
    outcome(
        &failures,
        format!("robust runs proper on {arbitrary_runs} arbitrary inputs; identical to plain on {identical} conforming runs"),
    )
}

fn criterion_10() -> Outcome {
    let spec = SweepSpec {
        families: vec![
            "tree".into(),
            "random-girth-constrained:g_min=9,m=60".into(),
            "subdivision:core=random,p=0.3,t=3".into(),
        ],
        sizes: vec![16, 48],
        seeds: vec![1, 2],
        orders: vec![Strategy::Random, Strategy::AdversarialSearch, Strategy::Bfs],
        algs: vec!["ff".into(), "a".into(), "bnd".into(), "bo".into(), "bo-offline".into(), "bnd-robust".into()],
        d: vec![2],
        restarts: 5,
    };
    let csv = |jobs| {
        let rows = run_sweep(&spec, jobs).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        // Drop the trailing wall_ms column.
        text.lines()
            .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
            .collect::<Vec<_>>()
    };
    let first = csv(1);
    let second = csv(4);
    let third = csv(2);
    let mut failures = Vec::new();
    if first != second || first != third {
        failures.push("CSV differs between reruns".to_string());
    }
    if !first[0].ends_with("pass,error") {
        failures.push(format!("unexpected header {}", first[0]));
    }
    outcome(&failures, format!("3 sweeps of {} rows byte-identical without wall_ms", first.len() - 1))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let start = Instant::now();
    let corpora = build_corpora();
    println!("corpora replayed and checked in {:.1}s", start.elapsed().as_secs_f64());
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("properness", Box::new(|| criterion_1(&corpora))),
        ("high-girth bound", Box::new(|| criterion_2(&corpora))),
        ("odd-girth bound", Box::new(|| criterion_3(&corpora))),
        ("bipartite bound and side sizes", Box::new(|| criterion_4(&corpora))),
        ("proof invariants and fault fixtures", Box::new(|| criterion_5(&corpora))),
        ("oracle equivalence", Box::new(criterion_6)),
        ("unknown-n wrapper", Box::new(criterion_7)),
        ("offline finish", Box::new(criterion_8)),
        ("robust mode", Box::new(criterion_9)),
        ("sweep determinism", Box::new(criterion_10)),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "criterion {:>2} {:<36} {}  {} [{:.1}s]",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
