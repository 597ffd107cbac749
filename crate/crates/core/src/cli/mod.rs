//! The `choquard-lab` command line.
//!
//! Exit codes: `0` success, `1` usage or configuration error, `2` numerical
//! non-convergence (or, for `verify`, a failed check).

mod config;
mod verbs;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{GridConfig, OutputConfig, ProblemConfig, RunConfig, SpectrumConfig, SweepConfig};

use crate::error::Error;
use crate::solver::Method;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "choquard-lab", version, about = "Radial ground states of the Choquard equation")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Compute a ground state and write `<stem>.json` and `<stem>.csv`.
    Solve(SolveArgs),
    /// Check a saved state against the functional identities and bounds.
    Verify(VerifyArgs),
    /// Low spectrum of the linearized operator.
    Spectrum(SpectrumArgs),
    /// Parameter sweep with distances to the Newtonian state.
    Sweep(SweepArgs),
    /// Riesz potential of a profile given as `r,value` CSV.
    Riesz(RieszArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Petviashvili,
    GradientFlow,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Fresh,
    Continued,
}

/// Overrides shared by the verbs that build a problem.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Local model `-Δu + u = |u|^{p-1}u`.
    #[arg(long)]
    pub model: bool,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub stretch: Option<f64>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// File stem of the written state.
    #[arg(long)]
    pub stem: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// State JSON written by `solve`.
    pub state: PathBuf,
    /// Also write `verify.json` here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// State JSON written by `solve`; optional with `--zero-field`.
    pub state: Option<PathBuf>,
    /// Sectors, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub ell: Vec<i64>,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = crate::spectrum::DEFAULT_GAP_TOL)]
    pub gap_tol: f64,
    /// Linearize at `Q = 0` (the free operator) on the configured grid.
    #[arg(long)]
    pub zero_field: bool,
    /// Write eigenfields as `spectrum_ell<ℓ>.csv`.
    #[arg(long)]
    pub dump_eigenfields: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub ps: Vec<f64>,
    /// Geometric approach path with this many points.
    #[arg(long)]
    pub geometric: Option<usize>,
    /// Initial offset of the geometric path.
    #[arg(long, default_value_t = 0.04)]
    pub delta: f64,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Newton increments per point in continued mode.
    #[arg(long, default_value_t = 2)]
    pub steps: usize,
    /// Attach nearest-to-zero eigenvalues per sector.
    #[arg(long)]
    pub spectra: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Reuse records of an existing manifest in the output directory.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Debug, Args)]
pub struct RieszArgs {
    /// CSV with columns `r,value`; linearly interpolated onto the grid.
    #[arg(long)]
    pub profile: PathBuf,
    /// Harmonic sector of the potential.
    #[arg(long, default_value_t = 0)]
    pub ell: i64,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Petviashvili => Method::Petviashvili,
            MethodArg::GradientFlow => Method::GradientFlow,
        }
    }
}

/// Maps an error to its exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonConvergence { .. } | Error::NewtonDivergence { .. } | Error::Eigen(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the verb, returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.verb {
        Verb::Solve(a) => verbs::solve(a),
        Verb::Verify(a) => verbs::verify(a),
        Verb::Spectrum(a) => verbs::spectrum(a),
        Verb::Sweep(a) => verbs::sweep(a),
        Verb::Riesz(a) => verbs::riesz(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
