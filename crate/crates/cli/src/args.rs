use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isospec_core::IntegralOrigin;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "isospec", version, about = "SUSY partners and strictly isospectral deformations of 1-D potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground state, SUSY partner and both spectra.
    Solve(RunArgs),
    /// One-parameter deformation V_λ.
    Deform(RunArgs),
    /// Repeated deformation with renormalization at every step.
    Chain(RunArgs),
    /// Run the invariant suite; exit 1 if anything fails.
    Verify(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Deform(_) => "deform",
            Command::Chain(_) => "chain",
            Command::Verify(_) => "verify",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Solve(a) | Command::Deform(a) | Command::Chain(a) | Command::Verify(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Catalog name (harmonic, box, poschl_teller) or path to an `x,V` CSV table.
    #[arg(long)]
    pub potential: String,

    /// Oscillator frequency for `harmonic`.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,

    /// Well strength for `poschl_teller`.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,

    /// Number of grid points (odd, at least 3).
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of eigenvalues to compare.
    #[arg(long, default_value_t = 6)]
    pub k: usize,

    /// Single deformation parameter.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "lambdas")]
    pub lambda: Option<f64>,

    /// Comma-separated deformation parameters.
    #[arg(long, allow_hyphen_values = true)]
    pub lambdas: Option<String>,

    #[arg(long, value_enum, default_value_t = OriginArg::Left)]
    pub integral_origin: OriginArg,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Leave the generation time out of the report.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OriginArg {
    Left,
    Mid,
}

impl From<OriginArg> for IntegralOrigin {
    fn from(o: OriginArg) -> Self {
        match o {
            OriginArg::Left => IntegralOrigin::Left,
            OriginArg::Mid => IntegralOrigin::Mid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}
