//! `sdt`: list the transform registry, run verifications, evaluate radial
//! transforms and tabulate the two-dimensional transfer solution.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status for a run whose checks or rows did not all succeed.
const EXIT_FAILED: u8 = 1;
/// Exit status for invalid configuration or engine errors.
const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "sdt",
    version,
    about = "Simultaneous Fourier-Laplace double transforms of isotropic functions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Pass tolerance for `verify`; quadrature relative tolerance for
    /// `transform` and `rte`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Talbot inversion nodes.
    #[arg(long, global = true, default_value_t = 48)]
    pub nodes: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonReport,
    TextTable,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the registry of double-transform pairs.
    Pairs(PairsArgs),
    /// Verify pairs in the mixed (k, t) domain.
    Verify(VerifyArgs),
    /// Tabulate the two-dimensional transfer solution.
    Rte(RteArgs),
    /// Evaluate a forward or inverse radial Fourier transform.
    Transform(TransformArgs),
}

#[derive(Args, Debug)]
pub struct PairsArgs {
    /// Show only this row (`1.1` .. `2.4` or `2D-SDT`).
    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Row id, `2D-SDT`, or `all`.
    #[arg(long)]
    pub pair: String,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dim: Vec<u32>,
    /// Catalog original such as `exp_decay:1` or `poly_exp:1,1`, or `all`.
    #[arg(long = "f", default_value = "all")]
    pub original: String,
    /// Wavenumbers of the sample grid.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<f64>>,
    /// Times of the sample grid.
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Offset `a > 0` of row 1.5.
    #[arg(long)]
    pub a: Option<f64>,
    /// Keep measured wall times in the reports (they make output differ
    /// between identical runs).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct RteArgs {
    /// Speed of propagation.
    #[arg(long)]
    pub c: f64,
    /// Mean free path.
    #[arg(long)]
    pub ell: f64,
    /// Source amplitude.
    #[arg(long = "A0")]
    pub a0: f64,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    /// Comma-separated radii.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    /// Also tabulate the total energy `t,energy`.
    #[arg(long)]
    pub energy: bool,
    /// File for the energy table; defaults to `<out stem>_energy.<ext>` next to
    /// `--out`, or standard output after the main table.
    #[arg(long)]
    pub energy_out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub direction: Direction,
    /// Space dimension (at least 1).
    #[arg(long)]
    pub dim: u32,
    /// Profile name: gaussian, exponential, yukawa or their `-image` forms.
    #[arg(long)]
    pub profile: String,
    /// Comma-separated evaluation points (`k` forward, `r` inverse).
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
