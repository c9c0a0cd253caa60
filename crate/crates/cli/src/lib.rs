//! Command-line front end: scenario files, simulation, estimation and
//! Monte Carlo comparisons with CSV and plot-data output.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod methods;
pub mod output;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{exit, CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "tma",
    version,
    about = "Bearings-only trajectory estimation experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one noisy bearing series and the matching truth track.
    Simulate(SimulateArgs),
    /// Fit a trajectory to an observations file.
    Estimate(EstimateArgs),
    /// Paired Monte Carlo comparison of estimation methods.
    Compare(CompareArgs),
    /// Repeat the comparison over values of one scenario parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Overrides the seed in the scenario file.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Observations CSV as written by `simulate`.
    #[arg(long)]
    pub observations: PathBuf,
    #[arg(long, default_value = "legendre")]
    pub basis: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(0..=12))]
    pub degree: u32,
    #[arg(long)]
    pub refine: bool,
    /// Full method spec; overrides --basis, --degree and --refine.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Method spec, e.g. `name=npoly,basis=cheb1,degree=2,refine=true`.
    /// Repeatable; defaults to the scenario's method list.
    #[arg(long = "method")]
    pub methods: Vec<String>,
    /// Worker threads; defaults to all cores. Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Also write a gnuplot script next to the plot data.
    #[arg(long)]
    pub plot_script: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepParam {
    InitialRange,
    SigmaDeg,
    Degree,
    NObs,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::InitialRange => "initial_range",
            SweepParam::SigmaDeg => "sigma_deg",
            SweepParam::Degree => "degree",
            SweepParam::NObs => "n_obs",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub values: Vec<f64>,
}

/// Runs one parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => commands::simulate::run(&a).map(|_| ()),
        Command::Estimate(a) => commands::estimate::run(&a).map(|_| ()),
        Command::Compare(a) => commands::compare::run(&a).map(|out| out.print_summary()),
        Command::Sweep(a) => commands::sweep::run(&a).map(|_| ()),
    }
}
