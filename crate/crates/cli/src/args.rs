use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "rex",
    version,
    about = "Rank-extreme bounds, rank inference and simulations"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Directory for result files and the run manifest.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Evaluate the bounds and the regime for p variables and rank d.
    Bound(BoundArgs),
    /// Estimate the rank from a CSV of observations (rows) by variables (columns).
    Estimate(EstimateArgs),
    /// Test H0: rank = d against the observations in a CSV.
    RankTest(RankTestArgs),
    /// Overall significance test of a regression from design and response CSVs.
    TestRegression(RegressionArgs),
    /// ReX bound on the PoSI constant.
    Posi(PosiArgs),
    /// Monte Carlo studies.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Write a simulated observation matrix as CSV.
    Generate(GenerateArgs),
    /// Re-run the command recorded in a manifest and verify its outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub d: u64,
    /// Relative half-width of the exact-low band around the separation constant.
    #[arg(long, default_value_t = rex_core::bounds::DEFAULT_REGIME_MARGIN)]
    pub margin: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    /// Observation CSV; an optional header row is skipped.
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Seed that generated the input, recorded in the report.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct RankTestArgs {
    pub input: PathBuf,
    /// Hypothesized rank.
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct RegressionArgs {
    /// Design CSV, n rows by p columns.
    pub design: PathBuf,
    /// Response CSV with a single column of n values.
    pub response: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Center columns and response before scaling them to unit length.
    #[arg(long)]
    pub center: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PosiMode {
    /// (6p/m)^m statistics.
    AsymptoticRate,
    /// Σ_{k≤m} k·C(p,k) statistics.
    Exact,
}

#[derive(Debug, Args, Serialize)]
pub struct PosiArgs {
    #[arg(long)]
    pub p: u64,
    /// Largest submodel size; defaults to p.
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, value_enum, default_value_t = PosiMode::Exact)]
    pub mode: PosiMode,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Simulate {
    /// Single-observation extremes per rank, with density estimates.
    Trichotomy(TrichotomyArgs),
    /// Replicate means of the extremes over n rows per rank.
    Means(TrichotomyArgs),
    /// Coverage of the rank confidence interval.
    Coverage(CoverageArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TrichotomyArgs {
    #[arg(long)]
    pub p: u64,
    /// Ranks as a comma list with `a:b` ranges; `iid` means p independent variables.
    #[arg(long, default_value = "3,10,100,300,iid")]
    pub ranks: String,
    #[arg(long, default_value_t = 5000)]
    pub reps: usize,
    /// Rows per replicate for the means study.
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct CoverageArgs {
    /// Variable counts, e.g. `3000,15000`.
    #[arg(long)]
    pub p: String,
    /// Ranks, e.g. `5:12`.
    #[arg(long)]
    pub d: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub p: usize,
    /// Rank, or `iid`.
    #[arg(long)]
    pub d: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Standard deviation of added Gaussian noise.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
