//! Command-line interface of the `seglat` binary.
//!
//! Every subcommand can be written to a TOML run configuration with
//! `--record` and replayed with `run --config`. Exit codes: 0 success,
//! 1 verification failure, 2 usage or domain error, 3 I/O error.

mod analytic_cmd;
mod commands;
mod render;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::lattice::Boundary;
use crate::models::ModelTag;
use crate::montecarlo::{LocalEvent, Runner, Vary};
use crate::Error;

pub use analytic_cmd::{evaluate_formula, Formula};
pub use render::render_svg;
pub use verify::{run_checks, CheckResult, Group};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "seglat", version, about = "Random segment percolation on Z^d")]
pub struct Cli {
    /// Worker threads; 0 uses every available core.
    #[arg(long, global = true, env = "SEGLAT_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Also write the command as a TOML run configuration.
    #[arg(long, global = true)]
    pub record: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Sample a site configuration and its blue edges as JSON artifacts.
    Sample(SampleArgs),
    /// Draw sampled artifacts as SVG.
    Render(RenderArgs),
    /// Check closed forms, oracles and couplings.
    Verify(VerifyArgs),
    /// Estimate a local event probability.
    Estimate(EstimateArgs),
    /// Estimate the wrapping probability.
    Wrap(WrapArgs),
    /// Locate the 0.5 crossing of the wrapping probability.
    Critical(CriticalArgs),
    /// Wrapping probability over a (p, lambda) grid.
    Sweep(SweepArgs),
    /// Critical curve of mixed site-bond percolation.
    MixedCurve(MixedCurveArgs),
    /// Compare block-event formulas with simulation.
    Blockcheck(BlockArgs),
    /// Evaluate a closed-form expression.
    Analytic(AnalyticArgs),
    /// Replay a recorded run configuration.
    Run(RunArgs),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub model: ModelTag,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Side length, or one length per axis separated by commas.
    #[arg(long = "L", value_delimiter = ',', required = true)]
    #[serde(rename = "L")]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = Boundary::Torus)]
    pub boundary: Boundary,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving `sites.json` and `edges.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderArgs {
    #[arg(long)]
    pub sites: PathBuf,
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Leave out occupied sites with no blue edge.
    #[arg(long, default_value_t = false)]
    pub omit_plain: bool,
    /// Darken clusters touching the left boundary.
    #[arg(long, default_value_t = false)]
    pub highlight_left: bool,
    /// Pixels per lattice spacing.
    #[arg(long, default_value_t = 10.0)]
    pub scale: f64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Run one group: formulas, local, compass, coupling, blocks.
    #[arg(long)]
    pub only: Option<Group>,
    /// Deliberately corrupt a check to exercise the harness.
    #[arg(long)]
    pub inject_fault: Option<Group>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also write the JSON-lines report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateArgs {
    #[arg(long)]
    pub model: ModelTag,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// edge-blue, vertex-blue, pair-collinear, pair-perp or pair-distance:K.
    #[arg(long)]
    pub event: LocalEvent,
    #[arg(long = "L", default_value_t = 256)]
    #[serde(rename = "L")]
    pub length: usize,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON mirror of the CSV.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Include per-replicate values in the JSON.
    #[arg(long, default_value_t = false)]
    pub full: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrapArgs {
    #[arg(long)]
    pub model: ModelTag,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "L", default_value_t = 128)]
    #[serde(rename = "L")]
    pub length: usize,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = false)]
    pub full: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalArgs {
    #[arg(long)]
    pub model: ModelTag,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long)]
    pub vary: Vary,
    /// Fixed density when varying lambda.
    #[arg(long)]
    pub p: Option<f64>,
    /// Fixed lambda when varying p.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    #[serde(rename = "L")]
    pub lengths: Vec<usize>,
    /// Search interval `lo,hi`.
    #[arg(long, value_delimiter = ',')]
    pub bracket: Option<Vec<f64>>,
    #[arg(long, default_value_t = 400)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub target: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 9)]
    pub scan_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = ModelTag::Independent)]
    pub model: ModelTag,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda_grid: Vec<f64>,
    #[arg(long = "L", default_value_t = 128)]
    #[serde(rename = "L")]
    pub length: usize,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = false)]
    pub full: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedCurveArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p_grid: Vec<f64>,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    #[serde(rename = "L")]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub target: f64,
    #[arg(long, default_value_t = 2e-3)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockArgs {
    /// Block scale; defaults to the value with q^r closest to 1/2.
    #[arg(long)]
    pub r: Option<usize>,
    /// Vacancy density 1 - p.
    #[arg(long, conflicts_with = "p")]
    pub q: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 100_000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticArgs {
    #[arg(long)]
    pub formula: Formula,
    #[arg(long)]
    pub d: Option<usize>,
    /// Decimal or fraction; decimals are read exactly.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Constant of the logarithmic percolation criterion.
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}

/// Command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

pub type CmdResult = std::result::Result<i32, Failure>;

/// Runs a parsed command, returning the process exit code.
pub fn execute(command: &Command, runner: &Runner) -> CmdResult {
    match command {
        Command::Sample(a) => commands::sample(a),
        Command::Render(a) => render::cmd_render(a),
        Command::Verify(a) => verify::cmd_verify(a, runner),
        Command::Estimate(a) => commands::estimate(a, runner),
        Command::Wrap(a) => commands::wrap(a, runner),
        Command::Critical(a) => commands::critical(a, runner),
        Command::Sweep(a) => commands::sweep(a, runner),
        Command::MixedCurve(a) => commands::mixed_curve(a, runner),
        Command::Blockcheck(a) => commands::blockcheck(a, runner),
        Command::Analytic(a) => analytic_cmd::cmd_analytic(a),
        Command::Run(a) => {
            let command = read_config(&a.config)?;
            if matches!(command, Command::Run(_)) {
                return Err(Failure::usage("a run configuration cannot itself be `run`"));
            }
            execute(&command, runner)
        }
    }
}

pub fn read_config(path: &std::path::Path) -> std::result::Result<Command, Failure> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    toml::from_str(&text).map_err(|e| Failure::usage(format!("invalid run configuration: {e}")))
}

pub fn write_config(path: &std::path::Path, command: &Command) -> std::result::Result<(), Failure> {
    let text = toml::to_string(command)
        .map_err(|e| Failure::usage(format!("cannot encode run configuration: {e}")))?;
    std::fs::write(path, text).map_err(Error::from)?;
    Ok(())
}

/// Parses `args` (program name first), runs the command and reports errors
/// on standard error.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = (|| {
        if let Some(path) = &cli.record {
            write_config(path, &cli.command)?;
        }
        execute(&cli.command, &Runner::new(cli.threads))
    })();
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn main() -> i32 {
    run_from(std::env::args_os())
}
