//! Command-line front end for the spectral shrinkage library.
//!
//! Subcommands:
//! * `estimate` — smooth a panel, build a shrinkage target, and write the
//!   combined spectral matrices plus per-frequency diagnostics.
//! * `simulate` — run the two-factor Monte Carlo benchmark and write a
//!   mean integrated squared error report.
//! * `diagnose` — tabulate condition numbers across smoothing spans.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

mod diagnose;
mod error;
mod estimate;
mod ingest;
mod manifest;
mod simulate;

#[derive(Parser)]
#[command(name = "specshrink", version, about = "Shrinkage estimation of spectral density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a spectral density matrix from a CSV panel.
    Estimate(EstimateArgs),
    /// Run the Monte Carlo benchmark described by a run specification.
    Simulate(SimulateArgs),
    /// Compare estimator conditioning across smoothing spans.
    Diagnose(DiagnoseArgs),
}

#[derive(clap::Args)]
pub struct EstimateArgs {
    /// CSV file with one column per series and one row per time point.
    pub input: PathBuf,
    /// Smoothing span (number of Fourier frequencies averaged; must be odd).
    #[arg(long)]
    pub span: usize,
    /// Shrinkage target: "market" (one-factor), "identity", or "none".
    #[arg(long, default_value = "market")]
    pub target: String,
    /// Market proxy: "mean", "col:K" (1-based panel column), or "file:PATH".
    #[arg(long, default_value = "mean")]
    pub market: String,
    /// Frequencies to report: omit for the half grid, "all" for the full
    /// circle, or a comma-separated list of angular frequencies in radians.
    #[arg(long)]
    pub frequencies: Option<String>,
    /// Also report rows/columns for the market proxy (index 0).
    #[arg(long)]
    pub include_market: bool,
    /// Use the raw shrinkage intensity without clamping it to [0, 1].
    #[arg(long)]
    pub no_clamp: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct SimulateArgs {
    /// JSON run specification (omit when using --preset).
    pub runspec: Option<PathBuf>,
    /// Built-in run specification: "figure2" or "figure3".
    #[arg(long)]
    pub preset: Option<String>,
    /// Override the number of Monte Carlo runs per sweep point.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct DiagnoseArgs {
    /// CSV file with one column per series and one row per time point.
    pub input: PathBuf,
    /// Comma-separated smoothing spans to compare (each must be odd).
    #[arg(long)]
    pub span_list: String,
    /// Market proxy: "mean", "col:K" (1-based panel column), or "file:PATH".
    #[arg(long, default_value = "mean")]
    pub market: String,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(args) => estimate::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Diagnose(args) => diagnose::run(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.code());
    }
}
