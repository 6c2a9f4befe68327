use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bpsp_core::bench::{format_g17, run_benchmark, write_outputs, BenchConfig};
use bpsp_core::instances::{read_instances, write_instances};
use bpsp_core::qaoa::MixerKind;
use bpsp_core::reduction::{build_graph, build_ising};
use bpsp_core::solver::{solver, SolverOptions, SOLVER_NAMES};
use bpsp_core::validate::{run_validation, ValidateOptions};
use bpsp_core::{BpspInstance, Seed};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bpsp", version, about = "Binary paint shop solvers and benchmark harness")]
struct Cli {
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances.
    Gen {
        #[arg(short = 'n', long = "cars", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(short = 'c', long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve every instance of a file and print `n swaps ratio coloring`.
    Solve {
        /// Instance file, or `-` for stdin.
        input: PathBuf,
        #[arg(short, long, default_value = "rsg", value_parser = clap::builder::PossibleValuesParser::new(SOLVER_NAMES))]
        algorithm: String,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=24))]
        cutoff: u64,
        #[arg(long, default_value = "x=y", value_parser = parse_mixer)]
        mixer: MixerKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Measurement shots for qaoa1.
        #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
    },
    /// Export the weighted graph or Ising form of every instance.
    Reduce {
        /// Instance file, or `-` for stdin.
        input: PathBuf,
        #[arg(short, long, value_enum, default_value_t = Format::Graph)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the invariant suite on random instances.
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Run a benchmark described by a config file.
    Bench { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph,
    Ising,
}

fn parse_mixer(s: &str) -> Result<MixerKind, String> {
    s.parse().map_err(|e: bpsp_core::Error| e.to_string())
}

fn read_source(input: &Path) -> bpsp_core::Result<Vec<BpspInstance>> {
    if input == Path::new("-") {
        read_instances(io::stdin().lock())
    } else {
        read_instances(BufReader::new(File::open(input)?))
    }
}

fn sink(output: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> bpsp_core::Result<bool> {
    match cli.command {
        Command::Gen { n, count, seed, output } => {
            let instances = (0..count)
                .map(|i| BpspInstance::random(n as usize, Seed(seed).derive_all(&[n, i])))
                .collect::<bpsp_core::Result<Vec<_>>>()?;
            let mut w = sink(output.as_deref())?;
            write_instances(&mut w, &instances)?;
            w.flush()?;
        }
        Command::Solve { input, algorithm, restarts, cutoff, mixer, seed, shots } => {
            let opts = SolverOptions { restarts: restarts as usize, mixer, cutoff: cutoff as usize, shots: shots as usize };
            let s = solver(&algorithm, &opts)?;
            let mut out = io::stdout().lock();
            for (i, x) in read_source(&input)?.iter().enumerate() {
                let sol = s.solve(x, Seed(seed).derive(i as u64))?;
                let ratio = sol.cost as f64 / x.n() as f64;
                writeln!(out, "{} {} {} {}", x.n(), sol.cost, format_g17(ratio), sol.coloring)?;
            }
        }
        Command::Reduce { input, format, output } => {
            let instances = read_source(&input)?;
            let mut w = sink(output.as_deref())?;
            for x in &instances {
                let text = match format {
                    Format::Graph => build_graph(x).to_text(),
                    Format::Ising => build_ising(x).to_text(),
                };
                w.write_all(text.as_bytes())?;
            }
            w.flush()?;
        }
        Command::Validate { seed, trials, inject_fault } => {
            let report = run_validation(&ValidateOptions { trials, seed, inject_fault })?;
            println!("{report}");
            return Ok(report.passed());
        }
        Command::Bench { config } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg = BenchConfig::parse(&text)?;
            if let Some(t) = cli.threads {
                cfg.workers = Some(cfg.workers.map_or(t as usize, |w| w.min(t as usize)));
            }
            cfg.records.get_or_insert_with(|| "records.csv".into());
            cfg.summary.get_or_insert_with(|| "summary.csv".into());
            let out = run_benchmark(&cfg)?;
            write_outputs(&cfg, &out)?;
            let mut stdout = io::stdout().lock();
            for row in &out.summary {
                writeln!(stdout, "{:<8} n={:<6} count={:<4} mean={:.4} std={:.4}", row.algorithm, row.n, row.count, row.mean, row.std)?;
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
