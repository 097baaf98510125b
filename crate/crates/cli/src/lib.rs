//! Command-line certification pipelines. Every subcommand produces a
//! [`RunReport`]; [`run`] is the whole program minus process I/O.

pub mod commands;
pub mod dimension;
pub mod input;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use campana_core::Characteristic;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use dimension::{expected_dimension, toric_expected_dimension};
pub use report::{Residual, RunReport, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] campana_core::Error),
    /// Exact solving was requested and no rational solution exists.
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "campana",
    version,
    about = "Certify Campana rational curves and orbifold covers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Characteristic of the base field (0 or a prime).
    #[arg(long = "char", global = true, default_value_t = 0)]
    pub characteristic: i64,
    /// Seed for every generated "general" choice.
    #[arg(long, global = true, env = "CAMPANA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall time in the report (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct Curve {
    /// Dimension `d` of the target `P^d`.
    #[arg(long)]
    pub dim: usize,
    /// Contact orders as lattice points of the fan of `P^d`.
    #[arg(long)]
    pub contacts: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverCase {
    Cyclic,
    Dihedral,
    Icosahedral,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smoothness and completeness of a fan.
    FanCheck {
        #[arg(long)]
        fan: String,
    },
    /// Balancing, Campana type, rank and torsion of a contact collection.
    CampanaCheck {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        contacts: String,
        #[arg(long)]
        mult: String,
    },
    /// Generate a Campana contact collection with given divisor degrees.
    GenContacts {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        mult: String,
        /// The same degree on every ray.
        #[arg(long, conflicts_with = "degrees", required_unless_present = "degrees")]
        degree: Option<u64>,
        /// One degree per ray, as a JSON list.
        #[arg(long)]
        degrees: Option<String>,
    },
    /// Build the curve with given contacts and certify its tangency.
    BuildCurve {
        #[command(flatten)]
        curve: Curve,
        /// Affine markings `s_k` (with `t_k = -1`); seeded when absent.
        #[arg(long)]
        markings: Option<String>,
        /// Image of `[1:0]`; all ones when absent.
        #[arg(long = "x-inf")]
        x_inf: Option<String>,
        #[arg(long)]
        mult: Option<String>,
    },
    /// Recompute the tangency table of a curve in the curve JSON format.
    VerifyCurve {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        mult: Option<String>,
    },
    /// Markings so that the curve passes through two torus points.
    TwoPoint {
        #[command(flatten)]
        curve: Curve,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, conflicts_with = "numeric")]
        exact: bool,
        #[arg(long)]
        numeric: bool,
    },
    /// Rank of the differential of the two-point evaluation map.
    JacobianRank {
        #[command(flatten)]
        curve: Curve,
        #[arg(long)]
        markings: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Rank of the exponent matrix in the given characteristic.
    Separability {
        #[command(flatten)]
        curve: Curve,
    },
    /// Campana condition for a truncated arc.
    JetCheck {
        #[arg(long)]
        jet: String,
        #[arg(long)]
        mult: String,
    },
    /// klt Fano test and maximal case of an orbifold structure on `P^1`.
    P1Classify {
        #[arg(long)]
        mult: String,
    },
    /// Build and certify a shipped cover, or certify a cover from JSON.
    P1Cover {
        #[arg(long = "case", value_enum, required_unless_present = "cover")]
        case: Option<CoverCase>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, conflicts_with = "case")]
        cover: Option<String>,
        /// Also tabulate log normal degrees after composing with general maps of degree 1..=N.
        #[arg(long)]
        compose: Option<u64>,
    },
    /// Genus of a cover of `P^1` from its branch partitions.
    RhCheck {
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        branch: String,
    },
    /// Expected dimension `chi + 3g - 3 + n`.
    ExpectedDim {
        #[arg(long, default_value_t = 0)]
        genus: u64,
        #[arg(long)]
        markings: u64,
        #[arg(
            long,
            conflicts_with = "toric_dim",
            required_unless_present = "toric_dim"
        )]
        chi: Option<i64>,
        /// Toric target of this dimension in genus 0 (`chi = dim`).
        #[arg(long)]
        toric_dim: Option<u64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FanCheck { .. } => "fan-check",
            Command::CampanaCheck { .. } => "campana-check",
            Command::GenContacts { .. } => "gen-contacts",
            Command::BuildCurve { .. } => "build-curve",
            Command::VerifyCurve { .. } => "verify-curve",
            Command::TwoPoint { .. } => "two-point",
            Command::JacobianRank { .. } => "jacobian-rank",
            Command::Separability { .. } => "separability",
            Command::JetCheck { .. } => "jet-check",
            Command::P1Classify { .. } => "p1-classify",
            Command::P1Cover { .. } => "p1-cover",
            Command::RhCheck { .. } => "rh-check",
            Command::ExpectedDim { .. } => "expected-dim",
        }
    }
}

/// Shared run settings.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub characteristic: Characteristic,
    pub seed: u64,
}

/// A finished run: the report and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub exit_code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let characteristic = Characteristic::new(cli.characteristic)
        .map_err(|e| CliError::Input(format!("--char: {e}")))?;
    let ctx = Context {
        characteristic,
        seed: cli.seed,
    };
    let mut report = commands::dispatch(&cli.command, ctx)?;
    if cli.timing {
        report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let exit_code = if report.passed() { 0 } else { 1 };
    Ok(Outcome { report, exit_code })
}
