mod manifest;
mod output;
mod point;
mod sweep;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use spinqcorr::sweep::{Measure, Model};

/// sysexits values.
const EX_USAGE: u8 = 64;
const EX_SOFTWARE: u8 = 70;
const EX_CANTCREAT: u8 = 73;

#[derive(Parser)]
#[command(name = "spinqcorr", version, about = "Quantum correlations of XXZ and LMG pair states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the control parameter and write CSV plus a run manifest.
    Sweep(SweepArgs),
    /// Run the validation suites.
    Validate(ValidateArgs),
    /// Inspect a single parameter value.
    Point(PointArgs),
}

#[derive(clap::Args)]
pub struct SweepArgs {
    /// xxz or lmg.
    #[arg(long, required_unless_present = "manifest")]
    model: Option<Model>,
    /// Site separation (XXZ only).
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "manifest")]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "manifest")]
    to: Option<f64>,
    #[arg(long, required_unless_present = "manifest")]
    step: Option<f64>,
    /// Finite-difference step; defaults to --step.
    #[arg(long)]
    derivative_step: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "N,I,D,U")]
    measures: Vec<Measure>,
    /// Keep grid points that fall on a phase boundary.
    #[arg(long)]
    include_boundaries: bool,
    /// Output prefix; writes <out>.csv and <out>.manifest.json.
    #[arg(long)]
    out: PathBuf,
    /// Detection threshold as a multiple of the local median.
    #[arg(long)]
    ratio: Option<f64>,
    /// Half-width of the median window, in grid steps.
    #[arg(long)]
    window: Option<usize>,
    /// Rerun the sweep recorded in a manifest.
    #[arg(
        long,
        conflicts_with_all = ["model", "from", "to", "step", "derivative_step", "measures", "include_boundaries", "ratio", "window"]
    )]
    manifest: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct ValidateArgs {
    /// closed-forms, ed, lmg, states or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Ring sizes for the exact-diagonalisation suite.
    #[arg(long = "n", value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Number of random states in the state suite.
    #[arg(long)]
    state_points: Option<usize>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// List every residual row, not only failing suites.
    #[arg(long)]
    verbose: bool,
}

#[derive(clap::Args)]
pub struct PointArgs {
    #[arg(long)]
    model: Model,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Output(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EX_USAGE,
            Failure::Output(_) => EX_CANTCREAT,
            Failure::Compute(_) => EX_SOFTWARE,
        }
    }
}

impl From<spinqcorr::Error> for Failure {
    fn from(e: spinqcorr::Error) -> Self {
        match e {
            spinqcorr::Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn usage(sub: &str) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    match cmd.find_subcommand_mut(sub) {
        Some(s) => s.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            if !e.render().to_string().contains("Usage:") {
                let sub = std::env::args().nth(1).unwrap_or_default();
                eprintln!("\n{}", usage(&sub));
            }
            return ExitCode::from(EX_USAGE);
        }
    };
    let (name, result) = match cli.command {
        Command::Sweep(a) => ("sweep", sweep::run(a)),
        Command::Validate(a) => ("validate", validate::run(a)),
        Command::Point(a) => ("point", point::run(a)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}\n\n{}", usage(name)),
                Failure::Output(msg) | Failure::Compute(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
