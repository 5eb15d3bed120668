use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sparse_rts::bench::{self, BenchConfig};
use sparse_rts::instance::{generate_instance, read_qaplib, write_qaplib, GeneratorConfig, MatrixOrder};
use sparse_rts::report::{write_trace_csv, RunReport};
use sparse_rts::solver::{run, verify_equivalence, EngineKind, InitialPermutation, SolverParams};
use sparse_rts::QapInstance;

#[derive(Parser)]
#[command(name = "qap-rts", version, about = "Robust tabu search for sparse quadratic assignment problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a k-regular flow graph over a square-grid distance matrix.
    Generate(GenerateArgs),
    /// Run one engine and print a JSON report.
    Solve(SolveArgs),
    /// Run both engines in lockstep; exits 0 iff their traces are identical.
    Verify(VerifyArgs),
    /// Timing experiments, emitted as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    FlowFirst,
    DistanceFirst,
}

impl From<Order> for MatrixOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::FlowFirst => MatrixOrder::FlowFirst,
            Order::DistanceFirst => MatrixOrder::DistanceFirst,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Dense,
    Sparse,
}

impl From<Engine> for EngineKind {
    fn from(e: Engine) -> Self {
        match e {
            Engine::Dense => EngineKind::Dense,
            Engine::Sparse => EngineKind::Sparse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Random,
    Identity,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    distance_scale: u32,
    #[arg(long, value_enum, default_value = "flow-first")]
    order: Order,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    instance: PathBuf,
    /// Matrix order in the instance file.
    #[arg(long, value_enum, default_value = "flow-first")]
    order: Order,
}

impl InstanceArgs {
    fn load(&self) -> Result<(String, QapInstance)> {
        let file = File::open(&self.instance).with_context(|| format!("opening {}", self.instance.display()))?;
        let name = instance_name(&self.instance);
        let inst = read_qaplib(io::BufReader::new(file), self.order.into())
            .with_context(|| format!("reading {}", self.instance.display()))?
            .with_name(name.clone());
        Ok((name, inst))
    }
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 10_000)]
    iterations: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tenure_min: Option<u64>,
    #[arg(long)]
    tenure_max: Option<u64>,
    /// Aspiration constant; defaults to 5n².
    #[arg(long)]
    aspiration: Option<u64>,
    #[arg(long, value_enum, default_value = "random")]
    initial: Start,
    /// Recheck cost, delta table and queues after every move.
    #[arg(long)]
    debug_checks: bool,
}

impl SearchArgs {
    fn params(&self) -> SolverParams {
        SolverParams {
            iterations: self.iterations,
            seed: self.seed,
            tenure_min: self.tenure_min,
            tenure_max: self.tenure_max,
            aspiration: self.aspiration,
            initial: match self.initial {
                Start::Random => InitialPermutation::Random,
                Start::Identity => InitialPermutation::Identity,
            },
            debug_checks: self.debug_checks,
            instrument: false,
            record_trace: false,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long, value_enum, default_value = "sparse")]
    engine: Engine,
    #[command(flatten)]
    search: SearchArgs,
    /// Collect per-phase timings.
    #[arg(long)]
    instrument: bool,
    /// Write the move trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[command(subcommand)]
    mode: BenchMode,
    #[arg(long, global = true, default_value_t = 10_000)]
    iterations: u64,
    #[arg(long, global = true, value_delimiter = ',', default_value = "1,2,3")]
    seeds: Vec<u64>,
    /// Allow fewer than three seeds.
    #[arg(long, global = true)]
    quick: bool,
    /// Run seeds concurrently instead of one after another.
    #[arg(long, global = true)]
    parallel: bool,
    /// CSV destination; standard output when absent.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchMode {
    /// Both engines over ascending sizes; prints fitted slopes to stderr.
    Scaling {
        #[arg(long, value_delimiter = ',', default_value = "250,500,1000,2000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Sparse engine over flow degrees at one size.
    Degree {
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "3,6,9,12")]
        degrees: Vec<usize>,
    },
    /// Share of sparse-engine time spent updating the queues.
    PqShare {
        #[arg(long, default_value_t = 2500)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let cfg = GeneratorConfig { n: args.n, k: args.k, seed: args.seed, distance_scale: args.distance_scale };
    let inst: QapInstance = generate_instance(&cfg)?;
    let mut w = output(args.out.as_deref())?;
    w.write_all(write_qaplib(&inst, args.order.into()).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn solve(args: &SolveArgs) -> Result<()> {
    let (name, inst) = args.input.load()?;
    let params = SolverParams {
        instrument: args.instrument,
        record_trace: args.trace.is_some(),
        ..args.search.params()
    };
    let result = run(&inst, &params, args.engine.into())?;
    if let Some(path) = &args.trace {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_trace_csv(&result.trace, BufWriter::new(file))?;
    }
    let trace_path = args.trace.as_ref().map(|p| p.display().to_string());
    write_json(&RunReport::new(name, &params, &result, trace_path), args.out.as_deref())
}

/// Exit status 0 when the traces match, 1 otherwise.
fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    let (_, inst) = args.input.load()?;
    let report = verify_equivalence(&inst, &args.search.params())?;
    write_json(&report, None)?;
    Ok(if report.is_identical() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run_bench(args: &BenchArgs) -> Result<()> {
    let mut cfg = BenchConfig {
        iterations: args.iterations,
        seeds: args.seeds.clone(),
        quick: args.quick,
        parallel: args.parallel,
        ..BenchConfig::default()
    };
    let points = match &args.mode {
        BenchMode::Scaling { sizes, k } => {
            let report = bench::bench_scaling(sizes, *k, &cfg)?;
            eprintln!(
                "dense slope {:.3}, sparse slope {:.3}, ratio slope {:.3}",
                report.dense_slope, report.sparse_slope, report.ratio_slope
            );
            report.points
        }
        BenchMode::Degree { n, degrees } => {
            let report = bench::bench_degree(*n, degrees, &cfg)?;
            eprintln!(
                "fit {:.3e} + {:.3e}·k s/iter, max relative deviation {:.3}",
                report.intercept,
                report.slope,
                report.max_relative_deviation()
            );
            report.points
        }
        BenchMode::PqShare { n, k } => {
            cfg.params.instrument = true;
            let (share, points) = bench::pq_share_points(*n, *k, &cfg)?;
            eprintln!("queue update share {share:.4}");
            points
        }
    };
    let mut w = output(args.out.as_deref())?;
    bench::write_csv(&points, &mut w)?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate(a) => generate(a).map(|_| ExitCode::SUCCESS),
        Command::Solve(a) => solve(a).map(|_| ExitCode::SUCCESS),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => run_bench(a).map(|_| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
