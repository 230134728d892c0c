use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use renyidep::SolverConfig;

use crate::render::Format;

#[derive(Debug, Parser)]
#[command(name = "renyidep", version, about = "Rényi-order dependence measures J_α and K_α on finite joint PMFs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one measure on a joint PMF.
    Measure {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        measure: MeasureKind,
        /// Order α > 0; required for every measure except I.
        #[arg(long)]
        alpha: Option<f64>,
        /// Also report the brute-force grid minimum (J and K, alphabets up to 3).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Tabulate J_α and K_α over an evenly spaced grid of orders.
    Sweep {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Restrict to one measure; the other columns are left empty.
        #[arg(long, value_enum, ignore_case = true)]
        measure: Option<SweepMeasure>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Minimal description rates for ρ-th moment task encoding.
    RateRegion {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        rho: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Estimate the ρ-th list-size moment of random-binning encoders.
    Simulate {
        #[arg(long)]
        file: PathBuf,
        /// Block length.
        #[arg(short, long)]
        n: usize,
        #[arg(long)]
        rx: f64,
        #[arg(long)]
        ry: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Enumerate all source sequences instead of sampling them.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run the built-in self-check suite.
    Verify {
        #[command(flatten)]
        solver: SolverArgs,
        /// Add this many bits to every reference K value (self-test of the suite).
        #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
        inject_k_offset: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    /// min over products of the Rényi divergence
    #[value(name = "J")]
    J,
    /// min over products of the relative α-entropy
    #[value(name = "K")]
    K,
    /// Shannon mutual information
    #[value(name = "I")]
    I,
    /// Rényi divergence from the product of marginals
    #[value(name = "D", alias = "Dα")]
    D,
    /// relative α-entropy from the product of marginals
    #[value(name = "Delta", alias = "Δα", alias = "Δ")]
    Delta,
    /// Rényi entropy of the joint and of each marginal
    #[value(name = "H", alias = "Hα")]
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMeasure {
    #[value(name = "J")]
    J,
    #[value(name = "K")]
    K,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Convergence tolerance on the objective change per sweep.
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    /// Starts per solve; defaults to 1 for α ≥ ½ and 8 below.
    #[arg(long)]
    pub starts: Option<usize>,
    /// Per-simplex resolution of the brute-force oracle.
    #[arg(long, default_value_t = 400)]
    pub grid_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iters: self.max_iters,
            n_starts: self.starts,
            grid_steps: self.grid_steps,
            seed: self.seed,
        }
    }
}
