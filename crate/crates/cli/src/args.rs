use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fkdv::closedform::SolutionId;

#[derive(Debug, Parser)]
#[command(name = "fkdv", version, about = "Exact traveling-wave solutions of fifth-order KdV equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Balance the highest linear and nonlinear terms to fix the ansatz degree.
    Balance(BalanceArgs),
    /// Derive the algebraic system for the tanh or projective Riccati ansatz.
    Derive(DeriveArgs),
    /// Solve the derived system at a rational wave speed.
    Solve(SolveArgs),
    /// Check catalog solutions against the PDE by residual sampling.
    Verify(VerifyArgs),
    /// Run the whole pipeline and report every acceptance check.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Ito,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Tanh,
    Pre,
}

/// Coefficients of `u_t + ω u_xxxxx + α u² u_x + β u_x u_xx + γ u u_xxx = 0`.
/// Unset coefficients take their Ito values.
#[derive(Clone, Debug, Default, Args)]
pub struct SpecArgs {
    #[arg(long, value_enum, conflicts_with_all = ["alpha", "beta", "gamma", "omega"])]
    pub preset: Option<Preset>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct OutputArgs {
    /// Write the JSON document to this path (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write LaTeX to this path (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    pub latex: Option<PathBuf>,
    /// Directory that relative output paths are resolved against.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Timestamp recorded in the manifest.
    #[arg(long, default_value = "1970-01-01T00:00:00Z")]
    pub timestamp: String,
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Ansatz depth; defaults to the balanced M (tanh) or 1 (pre).
    #[arg(long, visible_alias = "M")]
    pub m: Option<u8>,
    /// Compare against the shipped transcription of the published system.
    #[arg(long)]
    pub check_fixture: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, visible_alias = "M")]
    pub m: Option<u8>,
    /// Rational wave speed, e.g. `-6` or `-5/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// Sign `e` of the projective system; both signs when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub e: Option<i64>,
    /// Sign `ρ` of the projective system; both signs when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<i64>,
    #[arg(long, default_value_t = fkdv::branch_solver::SolveConfig::DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Catalog ids `u1`..`u10`.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    pub ids: Vec<SolutionId>,
    #[arg(long)]
    pub all: bool,
    /// Negative wave speeds to sample at.
    #[arg(long, num_args = 1.., allow_negative_numbers = true, default_values = ["-6"])]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    /// Half-width of the sampling window in the scaled wave variable.
    #[arg(long, default_value_t = 1.2)]
    pub z_half_width: f64,
    /// Compare two solutions pointwise instead of sampling residuals.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Exact checks run at λ = −6 m⁴ for m = 1..=depth.
    #[arg(long, default_value_t = 3)]
    pub lambda_grid_depth: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}
