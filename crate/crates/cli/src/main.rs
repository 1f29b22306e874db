use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use thorsim::pipeline::TimingMode;

mod commands;

#[derive(Debug, Parser)]
#[command(name = "thorsim", version, about = "Cycle-accurate neuromorphic core simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a network and write trace.csv, spikes.txt and energy.json.
    Run(RunArgs),
    /// Check the parallel pipeline against the scalar reference model.
    Validate(ValidateArgs),
    /// Sweep parallelism, memory type and clock; write sweep.csv and best.txt.
    Dse(DseArgs),
    /// Write design.json with geometry, area, access energies and peak throughput.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Network configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Event file, run before any generated events.
    #[arg(long)]
    events: Option<PathBuf>,
    /// Seed for generated events.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Energy coefficient file (TOML); the built-in qualitative set otherwise.
    #[arg(long)]
    coefficients: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Overrides {
    #[arg(long, value_parser = parse_mode)]
    mode: Option<TimingMode>,
    #[arg(long, value_parser = parse_frequency)]
    frequency_hz: Option<f64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    overrides: Overrides,
    /// Random events appended after the event file.
    #[arg(long, default_value_t = 0)]
    count: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = parse_frequency)]
    frequency_hz: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Corrupt one stored weight, `PRE:POST`, after the pipeline run.
    #[arg(long, hide = true, value_parser = parse_synapse)]
    inject_fault: Option<(usize, usize)>,
}

#[derive(Debug, Args)]
struct DseArgs {
    #[command(flatten)]
    common: Common,
    /// Sweep specification file.
    #[arg(long)]
    sweep: PathBuf,
    /// Random events; without this or --events the sweep's neuron-event count is used.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    coefficients: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[arg(long)]
    out: PathBuf,
}

fn parse_mode(s: &str) -> Result<TimingMode, String> {
    s.parse()
}

fn parse_frequency(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(f) if f.is_finite() && f > 0.0 => Ok(f),
        _ => Err(format!("`{s}` is not a positive frequency")),
    }
}

fn parse_synapse(s: &str) -> Result<(usize, usize), String> {
    let (pre, post) = s.split_once(':').ok_or("expected PRE:POST")?;
    let id = |t: &str| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((id(pre)?, id(post)?))
}

/// Exit status 1 for failed runs and validations, 2 for unusable arguments.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<thorsim::Error> for Failure {
    fn from(e: thorsim::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => commands::run(args),
        Command::Validate(args) => commands::validate(args),
        Command::Dse(args) => commands::dse(args),
        Command::Report(args) => commands::report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
