use std::fs;
use std::io::{self, Write};
use std::time::Instant;

use anyhow::Context;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};

use pagtc_core::binom::ExactBackend;
use pagtc_core::generators::navigable_small_world;
use pagtc_core::io::write_edge_list;
use pagtc_core::pagtc::closed_form::{
    semivalue_dirac_pagtc_with, semivalue_general_pagtc_with, shapley_pagtc_with,
};
use pagtc_core::pagtc::oracle::{brute_force_pagtc_guarded, monte_carlo_pagtc_detailed};
use pagtc_core::seedopt::solve;
use pagtc_core::targeting::growth_curve;
use pagtc_core::{
    c_beta, run_targeted, semivalue_dirac_pagtc, semivalue_general_pagtc, shapley_pagtc, Algorithm,
    BetaSpec, ContagionParams, ContagionState, Graph, NodeId, NodeSet, Objective, ScoreVector,
    SeedProblem, SeedSolution,
};

use crate::output::{graph_info, pct, write_rows, Format, Report, Row};
use crate::source::{parse_nodes, GraphSource};
use crate::{
    BenchArgs, CentralityArgs, GenArgs, MaximizeArgs, Method, SimulateArgs, Suite, TargetArgs,
    UsageError,
};

fn emit<R: Row>(report: Report<R>, format: Format) -> anyhow::Result<()> {
    report.write(format, &mut io::stdout().lock(), &mut io::stderr().lock())
}

fn labels(graph: &Graph, nodes: &[NodeId]) -> String {
    nodes
        .iter()
        .map(|&u| graph.label(u))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ids(nodes: &[NodeId]) -> String {
    nodes
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

// centrality

#[derive(Serialize)]
struct ScoreRow {
    id: NodeId,
    label: String,
    score: f64,
    exact: Option<String>,
    std_error: Option<f64>,
    oracle: Option<String>,
    deviation: Option<f64>,
}

impl Row for ScoreRow {
    const HEADERS: &'static [&'static str] = &[
        "id",
        "label",
        "score",
        "exact",
        "std_error",
        "oracle",
        "deviation",
    ];
}

fn score_float(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
) -> pagtc_core::Result<ScoreVector> {
    match beta {
        BetaSpec::Shapley => shapley_pagtc(graph, s0, params),
        BetaSpec::Dirac(size) => semivalue_dirac_pagtc(graph, s0, params, *size),
        other => semivalue_general_pagtc(graph, s0, params, other),
    }
}

fn score_exact(
    graph: &Graph,
    s0: &NodeSet,
    params: ContagionParams,
    beta: &BetaSpec,
) -> pagtc_core::Result<ScoreVector<BigRational>> {
    match beta {
        BetaSpec::Shapley => shapley_pagtc_with(&ExactBackend, graph, s0, params),
        BetaSpec::Dirac(size) => {
            semivalue_dirac_pagtc_with(&ExactBackend, graph, s0, params, *size)
        }
        other => semivalue_general_pagtc_with(&ExactBackend, graph, s0, params, other, true),
    }
}

pub fn centrality(args: CentralityArgs, format: Format) -> anyhow::Result<()> {
    let graph = args.graph.graph.load()?;
    let params = ContagionParams::new(args.graph.k)?;
    let s0 = parse_nodes(&graph, args.s0.as_deref())?;
    let n = graph.node_count();
    let beta = args.beta.resolve(n, s0.len())?;
    if args.exact && args.method == Method::MonteCarlo {
        return Err(
            UsageError("--exact cannot be combined with --method monte-carlo".into()).into(),
        );
    }

    let started = Instant::now();
    let (scores, exact, std_errors) = match (args.method, args.exact) {
        (Method::Closed, true) => {
            let exact = score_exact(&graph, &s0, params, &beta)?;
            (exact.to_f64(), Some(exact), None)
        }
        (Method::Closed, false) => (score_float(&graph, &s0, params, &beta)?, None, None),
        (Method::MonteCarlo, _) => {
            let est =
                monte_carlo_pagtc_detailed(&graph, &s0, params, &beta, args.samples, args.seed)?;
            (est.scores, None, Some(est.std_errors))
        }
    };
    let runtime = started.elapsed().as_secs_f64();

    let oracle_enabled = args.oracle && n <= args.guard;
    if args.oracle && !oracle_enabled {
        log::warn!(
            "oracle skipped: {n} nodes exceeds the guard of {}",
            args.guard
        );
    }
    let mut max_deviation: Option<f64> = None;
    let mut rows = Vec::with_capacity(scores.scored_count());
    for (u, score) in scores.ranking() {
        let exact_u = exact.as_ref().and_then(|e| e.get(u));
        let (oracle, deviation) = if oracle_enabled {
            let truth = brute_force_pagtc_guarded(&graph, &s0, params, &beta, u, args.guard)?;
            let deviation = match exact_u {
                Some(q) => (q - &truth).abs().to_f64().unwrap_or(f64::INFINITY),
                None => (score - truth.to_f64().unwrap_or(f64::NAN)).abs(),
            };
            max_deviation = Some(max_deviation.map_or(deviation, |m| m.max(deviation)));
            (Some(truth.to_string()), Some(deviation))
        } else {
            (None, None)
        };
        rows.push(ScoreRow {
            id: u,
            label: graph.label(u),
            score,
            exact: exact_u.map(ToString::to_string),
            std_error: std_errors.as_ref().and_then(|se| se[u]),
            oracle,
            deviation,
        });
    }

    let mut summary = json!({
        "scored": rows.len(),
        "sum": scores.sum(),
        "c_beta": c_beta(n, s0.len(), &beta)?,
        "runtime_s": runtime,
    });
    if oracle_enabled {
        summary["max_deviation"] = json!(max_deviation.unwrap_or(0.0));
    }
    emit(
        Report {
            command: "centrality",
            graph: graph_info(&args.graph.graph.to_string(), &graph),
            params: json!({
                "k": params.k(),
                "s0": s0.iter().map(|u| graph.label(u)).collect::<Vec<_>>(),
                "beta": beta.to_string(),
                "method": if args.method == Method::Closed { "closed" } else { "monte-carlo" },
                "exact": args.exact,
                "seed": args.seed,
            }),
            rows,
            summary,
        },
        format,
    )
}

// simulate

#[derive(Serialize)]
struct RoundRow {
    round: usize,
    active: usize,
    newly_active: usize,
    percent: String,
}

impl Row for RoundRow {
    const HEADERS: &'static [&'static str] = &["round", "active", "newly_active", "percent"];
}

pub fn simulate(args: SimulateArgs, format: Format) -> anyhow::Result<()> {
    let graph = args.graph.graph.load()?;
    let params = ContagionParams::new(args.graph.k)?;
    let seeds = parse_nodes(&graph, Some(&args.s0))?;
    let n = graph.node_count();

    let mut state = ContagionState::new(&graph, &seeds);
    let mut rows = vec![RoundRow {
        round: 0,
        active: state.active_count(),
        newly_active: state.active_count(),
        percent: pct(state.active_count(), n),
    }];
    loop {
        let fresh = state.advance(&graph, params);
        if fresh == 0 {
            break;
        }
        rows.push(RoundRow {
            round: rows.len(),
            active: state.active_count(),
            newly_active: fresh,
            percent: pct(state.active_count(), n),
        });
    }
    let one_round = rows.get(1).map_or(seeds.len(), |r| r.active);
    let full = state.active_count();
    emit(
        Report {
            command: "simulate",
            graph: graph_info(&args.graph.graph.to_string(), &graph),
            params: json!({
                "k": params.k(),
                "s0": seeds.iter().map(|u| graph.label(u)).collect::<Vec<_>>(),
            }),
            rows,
            summary: json!({
                "one_round": one_round,
                "one_round_pct": pct(one_round, n),
                "full": full,
                "full_pct": pct(full, n),
            }),
        },
        format,
    )
}

// maximize

#[derive(Serialize)]
struct SolutionRow {
    algorithm: String,
    objective: String,
    k: usize,
    r: usize,
    n: usize,
    seeds: String,
    seed_ids: String,
    one_round: usize,
    one_round_pct: String,
    full: usize,
    full_pct: String,
    runtime_s: f64,
}

impl Row for SolutionRow {
    const HEADERS: &'static [&'static str] = &[
        "algorithm",
        "objective",
        "k",
        "r",
        "n",
        "seeds",
        "seed_ids",
        "one_round",
        "one_round_pct",
        "full",
        "full_pct",
        "runtime_s",
    ];
}

impl SolutionRow {
    fn new(graph: &Graph, k: usize, sol: &SeedSolution) -> Self {
        let n = graph.node_count();
        SolutionRow {
            algorithm: sol.label().to_string(),
            objective: sol.objective.to_string(),
            k,
            r: sol.seeds.len(),
            n,
            seeds: labels(graph, &sol.seeds),
            seed_ids: ids(&sol.seeds),
            one_round: sol.one_round_value,
            one_round_pct: pct(sol.one_round_value, n),
            full: sol.full_value,
            full_pct: pct(sol.full_value, n),
            runtime_s: sol.runtime.as_secs_f64(),
        }
    }
}

pub fn maximize(args: MaximizeArgs, format: Format) -> anyhow::Result<()> {
    let graph = args.graph.graph.load()?;
    let params = ContagionParams::new(args.graph.k)?;
    let problem = SeedProblem::new(&graph, args.objective, args.r, params)?;
    let algorithms: Vec<Algorithm> = if args.all {
        Algorithm::ALL.to_vec()
    } else {
        vec![args.alg]
    };
    let mut rows = Vec::new();
    for alg in algorithms {
        let sol = solve(&graph, &problem, alg, args.guard)
            .with_context(|| format!("algorithm {}", alg.label(args.objective)))?;
        log::info!(
            "{}: value {} in {:?}",
            sol.label(),
            sol.value(),
            sol.runtime
        );
        rows.push(SolutionRow::new(&graph, params.k(), &sol));
    }
    let best = rows
        .iter()
        .map(|row| match args.objective {
            Objective::OneRound => row.one_round,
            Objective::Full => row.full,
        })
        .max()
        .unwrap_or(0);
    emit(
        Report {
            command: "maximize",
            graph: graph_info(&args.graph.graph.to_string(), &graph),
            params: json!({
                "k": params.k(),
                "r": args.r,
                "objective": args.objective.to_string(),
                "guard": args.guard.to_string(),
            }),
            rows,
            summary: json!({ "best": best, "best_pct": pct(best, graph.node_count()) }),
        },
        format,
    )
}

// target

#[derive(Serialize)]
struct TraceRow {
    strategy: String,
    k: usize,
    n: usize,
    rounds: usize,
    rounds_pct: String,
    chosen: String,
    chosen_ids: String,
}

impl Row for TraceRow {
    const HEADERS: &'static [&'static str] = &[
        "strategy",
        "k",
        "n",
        "rounds",
        "rounds_pct",
        "chosen",
        "chosen_ids",
    ];
}

pub fn target(args: TargetArgs, format: Format) -> anyhow::Result<()> {
    let graph = args.graph.graph.load()?;
    let params = ContagionParams::new(args.graph.k)?;
    let n = graph.node_count();
    let started = Instant::now();
    let trace = run_targeted(&graph, params, args.strategy)?;
    let runtime = started.elapsed().as_secs_f64();
    if let Some(path) = &args.growth {
        fs::write(path, growth_curve(&trace))
            .with_context(|| format!("writing growth curve to {}", path.display()))?;
    }
    let row = TraceRow {
        strategy: args.strategy.to_string(),
        k: params.k(),
        n,
        rounds: trace.rounds,
        rounds_pct: pct(trace.rounds, n),
        chosen: labels(&graph, &trace.chosen),
        chosen_ids: ids(&trace.chosen),
    };
    emit(
        Report {
            command: "target",
            graph: graph_info(&args.graph.graph.to_string(), &graph),
            params: json!({ "k": params.k(), "strategy": args.strategy.to_string() }),
            rows: vec![row],
            summary: json!({ "external_activations": trace.chosen.len(), "runtime_s": runtime }),
        },
        format,
    )
}

// gen

pub fn gen(args: GenArgs) -> anyhow::Result<()> {
    let graph = navigable_small_world(args.side, args.q, args.exponent, args.seed)?;
    let text = write_edge_list(&graph);
    match &args.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    log::info!(
        "generated {} nodes, {} edges",
        graph.node_count(),
        graph.edge_count()
    );
    Ok(())
}

// bench

#[derive(Serialize)]
struct BenchRow {
    suite: String,
    graph: String,
    n: usize,
    k: usize,
    r: Option<usize>,
    objective: String,
    algorithm: String,
    value: usize,
    percent: String,
    runtime_s: f64,
    influence_ratio: Option<f64>,
}

impl Row for BenchRow {
    const HEADERS: &'static [&'static str] = &[
        "suite",
        "graph",
        "n",
        "k",
        "r",
        "objective",
        "algorithm",
        "value",
        "percent",
        "runtime_s",
        "influence_ratio",
    ];
}

/// Streams rows in the delimited formats so that finished cells survive a
/// later failure; JSON collects them and reports failures alongside.
struct BenchSink {
    format: Format,
    rows: Vec<BenchRow>,
    failures: Vec<String>,
    started: bool,
}

impl BenchSink {
    fn push(&mut self, row: BenchRow) -> anyhow::Result<()> {
        if self.format == Format::Json {
            self.rows.push(row);
            return Ok(());
        }
        let mut out = io::stdout().lock();
        if self.started {
            write_rows_without_header(self.format, &row, &mut out)?;
        } else {
            write_rows(self.format, std::slice::from_ref(&row), &mut out)?;
            self.started = true;
        }
        out.flush()?;
        Ok(())
    }

    fn fail(&mut self, cell: String, err: anyhow::Error) {
        log::error!("{cell}: {err:#}");
        self.failures.push(format!("{cell}: {err:#}"));
    }
}

fn write_rows_without_header(
    format: Format,
    row: &BenchRow,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    write_rows(format, std::slice::from_ref(row), &mut buf)?;
    let text = String::from_utf8(buf)?;
    let body = text.split_once('\n').map_or("", |(_, rest)| rest);
    out.write_all(body.as_bytes())?;
    Ok(())
}

fn bench_table1(
    sink: &mut BenchSink,
    name: &str,
    graph: &Graph,
    ks: &[usize],
    objectives: &[Objective],
    guard: u128,
) -> anyhow::Result<()> {
    let n = graph.node_count();
    for &k in ks {
        let r = 2 * k;
        for &objective in objectives {
            for alg in Algorithm::ALL {
                let cell = format!("table1 {name} K={k} {objective} {}", alg.label(objective));
                let outcome = ContagionParams::new(k)
                    .and_then(|params| SeedProblem::new(graph, objective, r, params))
                    .and_then(|problem| solve(graph, &problem, alg, guard));
                match outcome {
                    Ok(sol) => sink.push(BenchRow {
                        suite: "table1".into(),
                        graph: name.to_string(),
                        n,
                        k,
                        r: Some(r),
                        objective: objective.to_string(),
                        algorithm: sol.label().to_string(),
                        value: sol.value(),
                        percent: pct(sol.value(), n),
                        runtime_s: sol.runtime.as_secs_f64(),
                        influence_ratio: None,
                    })?,
                    Err(err) => sink.fail(cell, err.into()),
                }
            }
        }
    }
    Ok(())
}

fn bench_table2(
    sink: &mut BenchSink,
    name: &str,
    graph: &Graph,
    ks: &[usize],
    strategies: &[pagtc_core::TargetingStrategy],
) -> anyhow::Result<()> {
    let n = graph.node_count();
    for &k in ks {
        for &strategy in strategies {
            let started = Instant::now();
            let outcome = ContagionParams::new(k).and_then(|p| run_targeted(graph, p, strategy));
            match outcome {
                Ok(trace) => sink.push(BenchRow {
                    suite: "table2".into(),
                    graph: name.to_string(),
                    n,
                    k,
                    r: None,
                    objective: "rounds".into(),
                    algorithm: strategy.to_string(),
                    value: trace.rounds,
                    percent: pct(trace.rounds, n),
                    runtime_s: started.elapsed().as_secs_f64(),
                    influence_ratio: None,
                })?,
                Err(err) => sink.fail(format!("table2 {name} K={k} {strategy}"), err.into()),
            }
        }
    }
    Ok(())
}

fn bench_fig3(sink: &mut BenchSink, args: &BenchArgs, ks: &[usize]) -> anyhow::Result<()> {
    for &size in &args.sizes {
        let side = (size as f64).sqrt().round() as usize;
        if side * side != size || side < 2 {
            return Err(
                UsageError(format!("fig3 size {size} is not a square of a side >= 2")).into(),
            );
        }
        let graph = navigable_small_world(side, args.q, 2.0, args.seed)?;
        let name = GraphSource::SmallWorld {
            side,
            q: args.q,
            exponent: 2.0,
            seed: args.seed,
        }
        .to_string();
        let r = size.div_ceil(10);
        for &k in ks {
            let cell = format!("fig3 n={size} K={k}");
            let outcome = ContagionParams::new(k)
                .and_then(|p| SeedProblem::new(&graph, Objective::Full, r, p))
                .and_then(|problem| {
                    let pagtc = solve(&graph, &problem, Algorithm::PagtcDelta, 0)?;
                    let greedy = solve(&graph, &problem, Algorithm::Greedy, 0)?;
                    Ok((pagtc, greedy))
                });
            let (pagtc, greedy) = match outcome {
                Ok(pair) => pair,
                Err(err) => {
                    sink.fail(cell, err.into());
                    continue;
                }
            };
            let ratio = pagtc.full_value as f64 / greedy.full_value as f64;
            for sol in [&pagtc, &greedy] {
                sink.push(BenchRow {
                    suite: "fig3".into(),
                    graph: name.clone(),
                    n: size,
                    k,
                    r: Some(r),
                    objective: Objective::Full.to_string(),
                    algorithm: sol.label().to_string(),
                    value: sol.full_value,
                    percent: pct(sol.full_value, size),
                    runtime_s: sol.runtime.as_secs_f64(),
                    influence_ratio: Some(ratio),
                })?;
            }
        }
    }
    Ok(())
}

pub fn bench(args: BenchArgs, format: Format) -> anyhow::Result<()> {
    let mut sink = BenchSink {
        format,
        rows: Vec::new(),
        failures: Vec::new(),
        started: false,
    };
    let default_ks: &[usize] = if args.suite == Suite::Fig3 {
        &[5]
    } else {
        &[2, 3, 4]
    };
    let ks: Vec<usize> = if args.k.is_empty() {
        default_ks.to_vec()
    } else {
        args.k.clone()
    };
    let source = args
        .graph
        .clone()
        .unwrap_or_else(|| GraphSource::Bundled("flor-families".into()));
    let source_name = match &source {
        GraphSource::Bundled(name) => name.clone(),
        other => other.to_string(),
    };

    let suite_name = match args.suite {
        Suite::Table1 => {
            let graph = source.load()?;
            let objectives = match args.objective {
                Some(objective) => vec![objective],
                None => vec![Objective::OneRound, Objective::Full],
            };
            bench_table1(
                &mut sink,
                &source_name,
                &graph,
                &ks,
                &objectives,
                args.guard,
            )?;
            "table1"
        }
        Suite::Table2 => {
            let graph = source.load()?;
            bench_table2(&mut sink, &source_name, &graph, &ks, &args.strategy)?;
            "table2"
        }
        Suite::Fig3 => {
            bench_fig3(&mut sink, &args, &ks)?;
            "fig3"
        }
    };

    match format {
        Format::Json => {
            let doc = json!({
                "command": "bench",
                "graph": Value::String(if args.suite == Suite::Fig3 { "generated".into() } else { source.to_string() }),
                "params": { "suite": suite_name, "k": ks },
                "rows": sink.rows,
                "summary": { "failures": sink.failures },
            });
            let mut out = io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv | Format::Tsv => {
            if !sink.started {
                write_rows::<BenchRow>(format, &[], &mut io::stdout().lock())?;
            }
        }
    }
    if sink.failures.is_empty() {
        Ok(())
    } else {
        anyhow::bail!("{} benchmark cell(s) failed", sink.failures.len())
    }
}
