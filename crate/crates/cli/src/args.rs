//! Command line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use xitau::RootOptions;

#[derive(Debug, Parser)]
#[command(
    name = "xitau",
    about = "Least-root Taylor interpolation points: queries, scans, approximant tables, stochastic demos",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interpolation point for a single evaluation point.
    Xi(XiArgs),
    /// Sweep a one-dimensional model over a range of x and chart xi(x).
    Scan(ScanArgs),
    /// Rational grid approximants tau_n together with their limit.
    Taun(TaunArgs),
    /// Built-in discontinuity demonstration presets.
    Counterexample(CounterexampleArgs),
    /// First-order stochastic identity demo (delta method shape).
    Delta(DeltaArgs),
    /// Second-order telescoping walk demo (quadratic variation shape).
    Ito(ItoArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Function expression, e.g. "x^2" or "sin(x1)*x2".
    #[arg(long)]
    pub function: String,
    /// Number of variables.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Expansion center, comma separated, one value per variable.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub center: Vec<f64>,
    /// Expansion order k (the remainder uses derivatives of order k+1).
    #[arg(long, default_value_t = 0)]
    pub order: u32,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    /// Zero-test tolerance, relative to the residual scale.
    #[arg(long = "tol-zero")]
    pub tol_zero: Option<f64>,
    /// Bracket width below which the root search stops, in t.
    #[arg(long = "tol-t")]
    pub tol_t: Option<f64>,
    /// Grid cells on [0, 1] for the root scan.
    #[arg(long = "scan-points")]
    pub scan_points: Option<usize>,
}

impl ToleranceArgs {
    pub fn root_options(&self) -> RootOptions {
        let mut opts = RootOptions::default();
        if let Some(v) = self.tol_zero {
            opts.zero_tolerance = v;
        }
        if let Some(v) = self.tol_t {
            opts.t_tolerance = v;
        }
        if let Some(v) = self.scan_points {
            opts.scan_points = v;
        }
        opts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct XiArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Evaluation point, comma separated, one value per variable.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub point: Vec<f64>,
    /// Unused by this deterministic command; echoed in the output metadata.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Scan interval endpoints: --range A B with A < B.
    #[arg(long, num_args = 2, allow_hyphen_values = true, required = true)]
    pub range: Vec<f64>,
    /// Number of grid intervals over the range (rows = steps + 1).
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Unused by this deterministic command; echoed in the output metadata.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TaunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Evaluation point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub point: Vec<f64>,
    /// Values of n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// Dyadic grid depth M: candidates are j / 2^M.
    #[arg(long, default_value_t = 20)]
    pub depth: u32,
    /// Unused by this deterministic command; echoed in the output metadata.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    /// Quartic about c = -1: jump with a tangent root on the left.
    Standard,
    /// Mirror image about c = 1: tangent root on the right.
    Reflected,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, value_enum, default_value_t = Variant::Standard)]
    pub variant: Variant,
    /// Override the preset scan interval: --range A B.
    #[arg(long, num_args = 2, allow_hyphen_values = true)]
    pub range: Option<Vec<f64>>,
    /// Override the preset number of grid intervals.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Unused by this deterministic command; echoed in the output metadata.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Values of n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// Monte Carlo samples per n.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Random seed (echoed in the output metadata).
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ItoArgs {
    /// One-dimensional function expression.
    #[arg(long)]
    pub function: String,
    /// Time horizon of the walk.
    #[arg(long = "t", default_value_t = 1.0)]
    pub t_end: f64,
    /// Steps per path.
    #[arg(long, required = true)]
    pub steps: u64,
    /// Number of independent paths.
    #[arg(long, required = true)]
    pub paths: u64,
    /// Random seed (echoed in the output metadata).
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
