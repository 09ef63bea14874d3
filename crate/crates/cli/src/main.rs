//! `pagtc`: past-aware centrality scoring, contagion simulation, seed
//! selection, dynamic targeting and table reproduction.

mod commands;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pagtc_core::pagtc::oracle::BRUTE_FORCE_MAX_NODES;
use pagtc_core::seedopt::DEFAULT_SUBSET_GUARD;
use pagtc_core::{Algorithm, Error, Objective, TargetingStrategy};

use output::Format;
use source::{BetaArg, GraphSource};

#[derive(Debug, Parser)]
#[command(
    name = "pagtc",
    version,
    about = "Past-aware game-theoretic centrality for K-complex contagion"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Worker threads for the parallel scorers (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score every node outside S0.
    Centrality(CentralityArgs),
    /// Run the contagion from a seed set.
    Simulate(SimulateArgs),
    /// Choose r seeds maximizing one-round or full influence.
    Maximize(MaximizeArgs),
    /// Count rounds to full activation under dynamic targeting.
    Target(TargetArgs),
    /// Write a navigable small-world graph as an edge list.
    Gen(GenArgs),
    /// Run a table or figure experiment grid.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// bundled:NAME, file:PATH or gen:small-world:SIDE,Q,EXP,SEED
    #[arg(long, value_name = "SOURCE")]
    graph: GraphSource,

    /// Activation threshold K.
    #[arg(long)]
    k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed form for the chosen β.
    Closed,
    /// Sampled estimate (uses --samples and --seed).
    MonteCarlo,
}

#[derive(Debug, Args)]
struct CentralityArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Guaranteed collaborators: comma-separated ids or labels.
    #[arg(long)]
    s0: Option<String>,

    /// shapley, dirac:S, uniform:LO,HI or trunc:C
    #[arg(long, default_value = "shapley")]
    beta: BetaArg,

    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,

    /// Rational arithmetic; scores also printed as exact fractions.
    #[arg(long)]
    exact: bool,

    /// Cross-check every score against brute-force enumeration.
    #[arg(long)]
    oracle: bool,

    /// Largest node count the oracle will enumerate.
    #[arg(long, default_value_t = BRUTE_FORCE_MAX_NODES)]
    guard: usize,

    #[arg(long, default_value_t = 100_000)]
    samples: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Seed set: comma-separated ids or labels.
    #[arg(long)]
    s0: String,
}

#[derive(Debug, Args)]
struct MaximizeArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Seed budget.
    #[arg(long)]
    r: usize,

    /// one-round or full
    #[arg(long, default_value = "one-round")]
    objective: Objective,

    /// greedy, pagtc-delta, degree or optimal
    #[arg(long, default_value = "pagtc-delta")]
    alg: Algorithm,

    /// Run every algorithm.
    #[arg(long)]
    all: bool,

    /// Largest number of subsets the optimal search will enumerate.
    #[arg(long, default_value_t = DEFAULT_SUBSET_GUARD)]
    guard: u128,
}

#[derive(Debug, Args)]
struct TargetArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// degree, greedy-one-round, greedy-full, pagtc-shapley or pagtc-trunc:C
    #[arg(long)]
    strategy: TargetingStrategy,

    /// Write the growth curve ("round count" lines) here.
    #[arg(long, value_name = "FILE")]
    growth: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Lattice side; the graph has side² nodes.
    #[arg(long)]
    side: usize,

    /// Long-range contacts drawn per node.
    #[arg(long, default_value_t = 1)]
    q: usize,

    /// Distance exponent of the long-range law.
    #[arg(long, default_value_t = 2.0)]
    exponent: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output file (default: stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Table1,
    Table2,
    Fig3,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,

    /// Graph for table1/table2 (default: bundled:flor-families).
    #[arg(long, value_name = "SOURCE")]
    graph: Option<GraphSource>,

    /// Thresholds (default: 2,3,4 for tables, 5 for fig3).
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,

    /// Restrict table1 to one objective.
    #[arg(long)]
    objective: Option<Objective>,

    /// Targeting strategies for table2.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "degree,greedy-one-round,greedy-full,pagtc-shapley"
    )]
    strategy: Vec<TargetingStrategy>,

    /// Node counts for fig3; each must be a perfect square.
    #[arg(long, value_delimiter = ',', default_value = "100,400,900")]
    sizes: Vec<usize>,

    /// Long-range contacts per node for fig3 graphs.
    #[arg(long, default_value_t = 4)]
    q: usize,

    /// Generator seed for fig3 graphs.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Subset guard for the optimal column of table1.
    #[arg(long, default_value_t = DEFAULT_SUBSET_GUARD)]
    guard: u128,
}

/// Bad flag values discovered after parsing; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidParameter(_)
            | Error::UnknownDataset { .. }
            | Error::NodeOutOfRange { .. }
            | Error::NodeInSeeds(_)
            | Error::SeedsCoverGraph,
        ) => 2,
        _ => 1,
    }
}

/// A closed stdout (e.g. piping into `head`) is not a failure.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        let io = cause.downcast_ref::<std::io::Error>().or_else(|| {
            cause
                .downcast_ref::<csv::Error>()
                .and_then(|e| match e.kind() {
                    csv::ErrorKind::Io(io) => Some(io),
                    _ => None,
                })
        });
        let json = cause
            .downcast_ref::<serde_json::Error>()
            .and_then(serde_json::Error::io_error_kind);
        io.map(std::io::Error::kind).or(json) == Some(std::io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(UsageError("--threads must be >= 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    let format = cli.format;
    match cli.command {
        Command::Centrality(args) => commands::centrality(args, format),
        Command::Simulate(args) => commands::simulate(args, format),
        Command::Maximize(args) => commands::maximize(args, format),
        Command::Target(args) => commands::target(args, format),
        Command::Gen(args) => commands::gen(args),
        Command::Bench(args) => commands::bench(args, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
