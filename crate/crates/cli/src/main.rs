mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Sampling criteria, kernel synthesis and reconstruction for band-limited functions.
///
/// Exit codes: 0 success (or case 1), 2 determinant vanishes on a null set,
/// 3 determinant vanishes on a set of positive measure, 64 malformed input,
/// 65 unknown operator type, 66 family mismatch, 1 any other failure.
#[derive(Debug, Parser)]
#[command(name = "pwinterp", version)]
pub struct Cli {
    /// TOML file with defaults for any numeric flag (flags take precedence).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a family by its determinant profile; prints a JSON report.
    Classify {
        /// Operator-family JSON.
        family: PathBuf,
        /// Write the determinant profile as CSV.
        #[arg(long, value_name = "CSV")]
        profile: Option<PathBuf>,
        #[command(flatten)]
        criterion: CriterionArgs,
    },
    /// Synthesize kernels; writes `<prefix>_spectra.csv` and `<prefix>_values.csv`.
    Kernels {
        family: PathBuf,
        out_prefix: PathBuf,
        /// Use explicit formulas instead of spectral inversion.
        #[arg(long, value_enum, value_name = "KIND")]
        closed_form: Option<ClosedForm>,
        #[command(flatten)]
        kernel: KernelArgs,
        /// Points for the kernel-value table, as lo:hi:n [default: -4:4:81].
        #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
        x_range: Option<String>,
        /// Lattice window |j| for the biorthogonality check [default: 3].
        #[arg(long)]
        j_range: Option<usize>,
        #[command(flatten)]
        criterion: CriterionArgs,
    },
    /// Reconstruct a signal from its truncated samples; prints a JSON summary.
    Reconstruct {
        family: PathBuf,
        /// Signal JSON: {"terms": [{"c": [re, im], "x0": real}, ...]}.
        signal: PathBuf,
        /// Sample window |m| <= M [default: 40].
        #[arg(long = "M", short = 'M', value_name = "M")]
        m: Option<usize>,
        /// Evaluation points as lo:hi:n [default: -2:2:81].
        #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
        grid_range: Option<String>,
        /// Write the pointwise reconstruction as CSV.
        #[arg(long, value_name = "CSV")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, value_name = "KIND")]
        closed_form: Option<ClosedForm>,
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
    },
    /// Run a cross-check suite; exits 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Print the results as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CriterionArgs {
    /// Coarse grid size on the source interval [default: 4096].
    #[arg(long)]
    pub initial_grid: Option<usize>,
    /// Bisection levels around near-zero cells [default: 3].
    #[arg(long)]
    pub refine_levels: Option<usize>,
    /// |det| below this counts as zero [default: 1e-10].
    #[arg(long)]
    pub tol_det: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct KernelArgs {
    /// Source nodes per piece for spectral synthesis [default: 64].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Quadrature nodes for closed forms given as band integrals [default: 64].
    #[arg(long)]
    pub quad: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClosedForm {
    Sinc,
    Littmann,
    Shifted,
    Twonode,
    Diffquot,
    Dynamical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Littmann,
    Shifted,
    Vaaler,
    Dynamical,
    Diffquot,
    Twonode,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {:#}", err.source);
            ExitCode::from(err.code)
        }
    }
}
