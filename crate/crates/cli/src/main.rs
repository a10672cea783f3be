//! `lrp`: command-line driver for long-range percolation experiments.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 invalid config,
//! 3 budget refusal, 4 lemma-check failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrp_core::experiment::{self, ExperimentConfig, Generator};
use lrp_core::{io as graph_io, Error, Mode};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "lrp",
    version,
    about = "Long-range percolation on the box [N]^d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and write it in the LRPG binary format.
    Generate(Common),
    /// Grow balls from the centre and record boundary sizes per step.
    BallGrowth(Common),
    /// Graph diameter per trial, exact or from sampled sources.
    Diameter(Common),
    /// Alternating two-ball growth between random site pairs.
    TwoBall(Common),
    /// Median and quantiles of D_N log log N / log N over an N grid.
    Scaling(Common),
    /// Numerical checks of the weight and concentration bounds.
    VerifyLemmas(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Quenched,
    Annealed,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorArg {
    Eager,
    Naive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<u64>,
    /// Comma-separated side lengths for `scaling`.
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<u64>>,
    #[arg(long)]
    beta: Option<f64>,
    /// Distance exponent s; defaults to d.
    #[arg(long)]
    exponent: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    generator: Option<GeneratorArg>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long)]
    radius: Option<u64>,
    /// Sampled-source count for diameters; exact when absent.
    #[arg(long)]
    sources: Option<u64>,
    /// Worker threads; defaults to available parallelism.
    #[arg(long, env = "LRP_THREADS")]
    threads: Option<usize>,
    /// Output path; stdout when absent (required for `generate`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Print the resolved config as JSON and exit.
    #[arg(long)]
    print_config: bool,
    /// Report wall time on stderr.
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Config(String),
    Lib(Error),
    Lemma,
    Output(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

fn resolve(args: &Common) -> Result<ExperimentConfig, Failure> {
    let mut c = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = args.$field.clone() { c.$field = v; })* };
    }
    set!(d, n, n_grid, beta, seed, trials);
    if args.exponent.is_some() {
        c.exponent = args.exponent;
    }
    if args.max_steps.is_some() {
        c.max_steps = args.max_steps;
    }
    if args.radius.is_some() {
        c.radius = args.radius;
    }
    if args.sources.is_some() {
        c.sources = args.sources;
    }
    if let Some(m) = args.mode {
        c.mode = match m {
            ModeArg::Quenched => Mode::Quenched,
            ModeArg::Annealed => Mode::Annealed,
        };
    }
    if let Some(g) = args.generator {
        c.generator = match g {
            GeneratorArg::Eager => Generator::Eager,
            GeneratorArg::Naive => Generator::Naive,
        };
    }
    c.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(c)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_rows<T: Serialize>(rows: &[T], args: &Common) -> Result<(), Failure> {
    let mut w = sink(&args.out)?;
    match args.format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in rows {
                csv.serialize(r)?;
            }
            csv.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_graph_file(path: &Path, graph: &lrp_core::Graph) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    graph_io::write_graph(graph, &mut w)?;
    w.flush()?;
    Ok(())
}

fn run(command: &Command) -> Result<(), Failure> {
    let args = match command {
        Command::Generate(a)
        | Command::BallGrowth(a)
        | Command::Diameter(a)
        | Command::TwoBall(a)
        | Command::Scaling(a)
        | Command::VerifyLemmas(a) => a,
    };
    let config = resolve(args)?;
    if args.print_config {
        return emit_json(&config, &None);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        if t == 0 {
            return Err(Failure::Config("threads must be at least 1".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Output(format!("thread pool: {e}")))?;
    let started = Instant::now();
    let result = pool.install(|| -> Result<(), Failure> {
        match command {
            Command::Generate(_) => {
                let path = args
                    .out
                    .as_ref()
                    .ok_or_else(|| Failure::Config("generate needs --out <path>".into()))?;
                let (graph, summary) = experiment::run_generate(&config)?;
                write_graph_file(path, &graph)?;
                emit_json(&summary, &None)
            }
            Command::BallGrowth(_) => {
                let (records, summary) = experiment::run_ball_growth(&config)?;
                emit_rows(&records, args)?;
                eprintln!("{}", serde_json::to_string(&summary)?);
                Ok(())
            }
            Command::Diameter(_) => emit_rows(&experiment::run_diameter(&config)?, args),
            Command::TwoBall(_) => emit_rows(&experiment::run_two_ball(&config)?, args),
            Command::Scaling(_) => {
                let (report, _) = experiment::run_scaling(&config)?;
                match args.format {
                    Format::Csv => {
                        emit_rows(&report.rows, args)?;
                        eprintln!("{}", serde_json::to_string(&report.trend)?);
                        Ok(())
                    }
                    Format::Json => emit_json(&report, &args.out),
                }
            }
            Command::VerifyLemmas(_) => {
                let report = experiment::verify_lemmas(&config)?;
                emit_json(&report, &args.out)?;
                if report.passed {
                    Ok(())
                } else {
                    Err(Failure::Lemma)
                }
            }
        }
    });
    if args.timing {
        eprintln!("wall_time_s={:.3}", started.elapsed().as_secs_f64());
    }
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("lrp: invalid config: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e @ Error::Domain(_))) => {
            eprintln!("lrp: invalid config: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e @ Error::Budget { .. })) => {
            eprintln!("lrp: budget refused: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Lemma) => {
            eprintln!("lrp: lemma check failed; see report for witnesses");
            ExitCode::from(4)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("lrp: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Output(msg)) => {
            eprintln!("lrp: {msg}");
            ExitCode::from(1)
        }
    }
}
