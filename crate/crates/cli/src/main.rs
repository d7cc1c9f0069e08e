use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Build, verify and export rational extensions of the isotonic oscillator.
#[derive(Debug, Parser)]
#[command(name = "isoext", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct an extended potential and write it as JSON.
    Extend(ExtendArgs),
    /// Verify an exact identity; exits 1 if it fails.
    Check(CheckArgs),
    /// Compare the finite-difference spectrum with the exact one.
    Spectrum(SpectrumArgs),
    /// Sample the potential and eigenfunctions as CSV for plotting.
    PlotData(PlotArgs),
    /// Run the whole verification matrix and print a summary table.
    Suite(SuiteArgs),
}

/// Exact parameters, given as integers or `p/q`.
#[derive(Debug, Clone, Args)]
struct ParamArgs {
    #[arg(long, default_value = "2")]
    omega: String,
    #[arg(long, default_value = "5/2")]
    a: String,
}

#[derive(Debug, Args)]
struct ExtendArgs {
    #[arg(long)]
    series: String,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Riccati,
    Shape,
    Regularity,
    Klh,
    Wick,
    Coincidence,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: CheckKind,
    #[arg(long)]
    series: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    params: ParamArgs,
    /// Laguerre parameter for `klh`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Transformed levels checked by `riccati`.
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// `base` for the isotonic potential, or L0-L3.
    #[arg(long, default_value = "base")]
    series: String,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[command(flatten)]
    grid: GridArgs,
    /// Largest accepted eigenvalue error; defaults to 1e-3 * omega.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long, default_value = "base")]
    series: String,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[arg(long, default_value_t = 0.05)]
    x_min: f64,
    #[arg(long, default_value_t = 8.0)]
    x_max: f64,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Eigenfunction columns to add, e.g. `--k 0 --k 2`.
    #[arg(long)]
    k: Vec<usize>,
    /// Add the extra L3 ground state.
    #[arg(long)]
    extra_state: bool,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extend(a) => commands::extend(a),
        Command::Check(a) => commands::check(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::PlotData(a) => commands::plot_data(a),
        Command::Suite(a) => commands::suite(a),
    };
    match result {
        Ok(commands::Verdict::Pass) => ExitCode::SUCCESS,
        Ok(commands::Verdict::Fail) => ExitCode::from(1),
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
