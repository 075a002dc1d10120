//! `quantpool` — experiment harness for pooled-vs-average quantile
//! estimation under parallel replication.
//!
//! Subcommands:
//! * `simulate`      generate replications and dump raw paths as CSV
//! * `experiment`    MSE sweeps over a processor grid (CSV + SVG charts)
//! * `bias-variance` bias/variance tables at fixed L and fixed budget
//! * `verify`        run the verification suite and write its report
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error,
//! 3 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quantpool::verify::{self, VerifyOptions};
use quantpool::{run_replications, Ar1Params, Mm1Params, ProcessModel, RunPlan, DEFAULT_MM1_WARMUP};

use quantpool_cli::config::{
    default_bias_variance_config, default_experiment_config, ExperimentConfig, DEFAULT_BASE_SEED,
};
use quantpool_cli::{csvio, experiment, CliError};

#[derive(Parser)]
#[command(
    name = "quantpool",
    version,
    about = "Pooled vs average quantile estimation for parallel steady-state simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate R replications of a model and write the raw paths as CSV
    Simulate(SimulateArgs),
    /// Run MSE sweeps over processor grids; writes CSV and SVG per scenario
    Experiment(SweepArgs),
    /// Emit bias/variance tables at fixed run-length and fixed total budget
    BiasVariance(SweepArgs),
    /// Run the verification suite; exits nonzero if any check fails
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Process model
    #[arg(long, value_parser = ["ar1", "mm1"])]
    model: String,
    /// AR(1) correlation parameter (required for ar1)
    #[arg(long)]
    phi: Option<f64>,
    /// AR(1) mean parameter
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// AR(1) innovation standard deviation
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// M/M/1 utilization rho (required for mm1)
    #[arg(long)]
    utilization: Option<f64>,
    /// M/M/1 arrival rate lambda
    #[arg(long, default_value_t = 1.0)]
    arrival_rate: f64,
    /// Discarded leading observations (default: 0 for ar1, 5000 for mm1)
    #[arg(long)]
    warmup: Option<usize>,
    /// Run-length per replication
    #[arg(short = 'l', long)]
    run_length: usize,
    /// Number of replications
    #[arg(short = 'r', long)]
    replications: usize,
    #[arg(long, default_value_t = DEFAULT_BASE_SEED)]
    seed: u64,
    /// Worker threads (default: machine parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config file (built-in defaults when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config's base seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's worker count
    #[arg(long)]
    workers: Option<usize>,
    /// Override the config's output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's micro-replication count
    #[arg(long)]
    micro_reps: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (affects speed only, never results)
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for the report file
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::BiasVariance(args) => cmd_bias_variance(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let model = match args.model.as_str() {
        "ar1" => {
            let phi = args
                .phi
                .ok_or_else(|| CliError::Config("--phi is required for --model ar1".into()))?;
            let params = Ar1Params::new(args.mu, phi, args.sigma)
                .map_err(|e| CliError::Config(e.to_string()))?;
            ProcessModel::ar1(params).with_warmup(args.warmup.unwrap_or(0))
        }
        "mm1" => {
            let rho = args.utilization.ok_or_else(|| {
                CliError::Config("--utilization is required for --model mm1".into())
            })?;
            let params = Mm1Params::new(args.arrival_rate, rho)
                .map_err(|e| CliError::Config(e.to_string()))?;
            ProcessModel::mm1(params).with_warmup(args.warmup.unwrap_or(DEFAULT_MM1_WARMUP))
        }
        other => return Err(CliError::Config(format!("unknown model '{other}'"))),
    };
    let set = run_replications(&RunPlan {
        model,
        r: args.replications,
        l: args.run_length,
        base_seed: args.seed,
        workers: args.workers.unwrap_or_else(default_workers),
    })
    .map_err(|e| CliError::Config(e.to_string()))?;
    csvio::write_text(&args.out, &csvio::paths_to_csv(&set))?;
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn load_sweep_config(
    args: &SweepArgs,
    default: fn() -> ExperimentConfig,
) -> Result<ExperimentConfig, CliError> {
    let base = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => default(),
    };
    let config = base.with_overrides(
        args.seed,
        args.workers,
        args.out.clone(),
        args.micro_reps,
    );
    config.validate()?;
    Ok(config)
}

fn cmd_experiment(args: SweepArgs) -> Result<ExitCode, CliError> {
    let config = load_sweep_config(&args, default_experiment_config)?;
    for scenario in &config.scenarios {
        let output = experiment::run_experiment_scenario(scenario, &config)?;
        let csv_path = config.output_dir.join(format!("{}.csv", output.name));
        csvio::write_text(&csv_path, &output.csv)?;
        println!("wrote {}", csv_path.display());
        for (file, markup) in &output.charts {
            let path = config.output_dir.join(file);
            csvio::write_text(&path, markup)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bias_variance(args: SweepArgs) -> Result<ExitCode, CliError> {
    let config = load_sweep_config(&args, default_bias_variance_config)?;
    let csv = experiment::run_bias_variance(&config)?;
    let path = config.output_dir.join("bias_variance.csv");
    csvio::write_text(&path, &csv)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let opts = VerifyOptions {
        seed: args.seed,
        workers: args.workers.unwrap_or_else(default_workers),
        truth_shift: 0.0,
    };
    let outcomes = verify::run_all(&opts);
    let report = verify::render_report(&opts, &outcomes);
    print!("{report}");
    let path = args.out.join("verify_report.txt");
    csvio::write_text(&path, &report)?;
    println!("wrote {}", path.display());
    let all_passed = outcomes.iter().all(|o| o.passed());
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
