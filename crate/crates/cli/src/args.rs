use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcal_core::lattice::{DEFAULT_GRID_HI, DEFAULT_GRID_LO};
use qcal_core::verify::{DEFAULT_ALPHA, DEFAULT_Q, DEFAULT_SEED, DEFAULT_VERIFY_N_MAX};

#[derive(Debug, Parser)]
#[command(
    name = "qcal",
    version,
    about = "Generalized discrete q-Hermite II polynomials and the q-deformed Calogero-Vasiliev oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Deformation parameter, 0 < q < 1.
    #[arg(long, global = true, default_value_t = DEFAULT_Q, allow_negative_numbers = true)]
    pub q: f64,
    /// Calogero parameter, alpha > -1.
    #[arg(long, global = true, default_value_t = DEFAULT_ALPHA, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Largest polynomial degree.
    #[arg(long = "nmax", global = true, default_value_t = DEFAULT_VERIFY_N_MAX)]
    pub n_max: usize,
    /// Lowest lattice exponent (largest |x| = q^grid_lo).
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_LO, allow_negative_numbers = true)]
    pub grid_lo: i64,
    /// Highest lattice exponent.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_HI, allow_negative_numbers = true)]
    pub grid_hi: i64,
    /// Relative truncation tolerance for series and infinite products.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a single quantity.
    Eval(EvalArgs),
    /// Run a verification suite and print JSON-line reports.
    Verify {
        /// orthogonality, shifts, generating, ladder, commutation, casimir,
        /// coherent, plancherel, limits, degeneration or all.
        suite: String,
    },
    /// Write a table of values over the lattice.
    Table(TableArgs),
    /// q-Dunkl transform of a grid function read from CSV or JSON.
    Transform(TransformArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalTarget {
    Htilde,
    Weight,
    Wavefunction,
    Kernel,
    Coherent,
    Energy,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub target: EvalTarget,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Spectral variable of the kernel.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[command(flatten)]
    pub zeta: ZetaArgs,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    /// Real part of the coherent-state parameter.
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    pub zeta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub zeta_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Columns n, x, phi.
    Wavefunction,
    /// Columns n, x, htilde, weight, phi.
    Hermite,
    /// Columns x, re, im.
    Coherent,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub kind: TableKind,
    /// Comma-separated degrees (default 0..=nmax); an empty list gives a header-only table.
    #[arg(long)]
    pub ns: Option<String>,
    #[command(flatten)]
    pub zeta: ZetaArgs,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Grid function file; `.json` is read as JSON, anything else as CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Apply the inverse transform.
    #[arg(long)]
    pub inverse: bool,
}
