//! Command-line front end: run the experiment matrix, re-rank or re-plot
//! saved results, size random samples, and lint datasets.
//!
//! The LLM API key is read from the environment variable named by
//! `--api-key-env` (default `LLM_API_KEY`); it is never a flag.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use moot_bench::backend::BackendConfig;
use moot_bench::harness::report::write_ranks;
use moot_bench::harness::{emit_curves, load_datasets, run_experiment, BackendKind, ExperimentConfig, ExperimentReport, Treatment};
use moot_bench::stats::neo_samples;

#[derive(Parser)]
#[command(name = "moot-bench", version, about = "Budgeted active-learning benchmarks over MOOT tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run the full (dataset, treatment, budget, repeat) matrix.
    Run(RunArgs),
    /// Recompute rank tables from a saved report directory.
    Rank(DirArgs),
    /// Rewrite curve CSVs from a saved report directory.
    Curves(DirArgs),
    /// Random samples needed to hit the top `epsilon` with probability `confidence`.
    Neo {
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
    /// Load datasets and report their shape.
    Validate {
        #[arg(long, num_args = 1.., required = true)]
        data: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// CSV files or directories of CSV files.
    #[arg(long, num_args = 1..)]
    data: Vec<PathBuf>,
    /// Comma-separated treatments.
    #[arg(long, value_delimiter = ',', default_value = "synthcore,ucb_gpm,tpe,exploit,explore,random,baseline")]
    treatments: Vec<Treatment>,
    #[arg(long, value_delimiter = ',', default_value = "20,30,50,100")]
    budgets: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `surrogate` or `llm`.
    #[arg(long, default_value = "surrogate")]
    backend: BackendKind,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    cache_dir: Option<String>,
    /// Name of the environment variable holding the API key.
    #[arg(long)]
    api_key_env: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    /// Examples per synthesis round.
    #[arg(long, default_value_t = 3)]
    shots: usize,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct DirArgs {
    /// Report directory written by `run`.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

fn run(args: RunArgs) -> Result<(), String> {
    let mut llm = BackendConfig::default();
    if let Some(v) = args.endpoint {
        llm.endpoint = v;
    }
    if let Some(v) = args.model {
        llm.model = v;
    }
    if let Some(v) = args.cache_dir {
        llm.cache_dir = v;
    }
    if let Some(v) = args.api_key_env {
        llm.api_key_env = v;
    }
    if let Some(v) = args.temperature {
        llm.temperature = v;
    }
    let cfg = ExperimentConfig {
        data: args.data,
        treatments: args.treatments,
        budgets: args.budgets,
        repeats: args.repeats,
        seed: args.seed,
        backend: args.backend,
        llm,
        shots: args.shots,
        out: args.out.clone(),
        jobs: args.jobs,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
    report.write(&args.out).map_err(|e| e.to_string())?;
    emit_curves(&report, &args.out).map_err(|e| e.to_string())?;
    let m = &report.manifest;
    println!(
        "{} cells ({} failed), {} above pool mean, {} below pool min; wrote {}",
        m.cells,
        m.failed_cells,
        m.envelope_above_mean,
        m.envelope_below_min,
        args.out.display()
    );
    if m.envelope_below_min > 0 {
        eprintln!("warning: scores below the pool minimum indicate a scoring defect");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Rank(DirArgs { out }) => ExperimentReport::read(&out)
            .and_then(|r| write_ranks(&r.ranks, &out).map(|_| r.ranks.tables.len()))
            .map(|n| println!("wrote {n} rank tables to {}", out.display()))
            .map_err(|e| e.to_string()),
        Command::Curves(DirArgs { out }) => ExperimentReport::read(&out)
            .and_then(|r| emit_curves(&r, &out))
            .map(|_| println!("wrote curves to {}", out.display()))
            .map_err(|e| e.to_string()),
        Command::Neo { confidence, epsilon } => neo_samples(confidence, epsilon).map(|n| println!("{n}")).map_err(|e| e.to_string()),
        Command::Validate { data } => load_datasets(&data)
            .map(|ds| {
                for d in ds {
                    let i = &d.info;
                    println!("{}\trows={}\tx={}\ty={}\t{}", i.name, i.rows, i.x_dims, i.y_dims, i.stratum);
                }
            })
            .map_err(|e| e.to_string()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
