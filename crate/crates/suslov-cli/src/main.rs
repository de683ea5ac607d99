//! `suslov` command-line front end.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use config::{BranchArg, Format, RunConfig, SweepKind, Which};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Validation(String),
    /// Exit code 3.
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "suslov", version, about = "Heteroclinic motions of the Suslov rigid body")]
struct Cli {
    /// JSON run configuration; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file [default: stdout].
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Meromorphicity verdict for an inertia tensor (JSON).
    Classify(ClassifyArgs),
    /// Integrate the Euler-Poisson system and write the trajectory.
    Simulate(SimulateArgs),
    /// Angle between the limiting rotation axes (JSON).
    Angle(AngleArgs),
    /// Meromorphic solutions of the Poisson equations along the closed form.
    Solutions(SolutionsArgs),
    /// Coefficients of the extra polynomial first integral (JSON).
    Integrals(IntegralsArgs),
    /// Singular points, logarithmic flags and Liouvillian verdict (JSON).
    Galois(GaloisArgs),
    /// Parallel parameter sweep (CSV, rows in input order).
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Tensor JSON file {"I11", "I22", "I33", "I13", "I23"}.
    #[arg(long)]
    pub tensor: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Tensor JSON file (exclusive with --p/--d).
    #[arg(long)]
    pub tensor: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Start time [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    /// End time, may be below t0 [default: 10].
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    /// Number of output intervals [default: 200].
    #[arg(long)]
    pub samples: Option<usize>,
    /// [default: 1e-10]
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// [default: 1e-12]
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Initial state w1,w2,g1,g2,g3 [default: closed-form omega(t0), gamma = (0,0,1)].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    /// Initial gamma from row 0..2 of the closed-form basis (p = 1 or 3).
    #[arg(long)]
    pub fixture_row: Option<usize>,
    /// Renormalize gamma to the unit sphere after each step.
    #[arg(long)]
    pub project: bool,
    /// Add the F3 column (odd integer p).
    #[arg(long)]
    pub f3: bool,
    /// Sign of the closed-form amplitude used for the default omega [default: minus].
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct AngleArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Boundary-value integration instead of the closed formula.
    #[arg(long)]
    pub numeric: bool,
    /// Half-width T of the integration window [default: 20].
    #[arg(long = "T", alias = "horizon")]
    pub horizon: Option<f64>,
    /// Integration tolerance [default: 1e-10].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Energy rescaling factor A [default: 1].
    #[arg(long)]
    pub energy_scale: Option<f64>,
    /// [default: minus]
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
}

#[derive(Args, Debug)]
pub struct SolutionsArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Series construction or hand-written closed forms [default: generated].
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    /// Emit the Gram matrix report (JSON) instead of samples.
    #[arg(long)]
    pub gram: bool,
    /// Rotation sense of the complex pair [default: plus, minus for p = 3].
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// [default: -5]
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    /// [default: 5]
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    /// [default: 100]
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug)]
pub struct IntegralsArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Also check the defining PDE system in exact arithmetic.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct GaloisArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// Run the certificates for even |p| > 10 as well.
    #[arg(long)]
    pub extend: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// [default: angle]
    #[arg(long, value_enum)]
    pub kind: Option<SweepKind>,
    /// Comma-separated p values.
    #[arg(long = "p", value_delimiter = ',')]
    pub p_values: Option<Vec<f64>>,
    /// Comma-separated d values (angle sweeps).
    #[arg(long = "d", value_delimiter = ',')]
    pub d_values: Option<Vec<f64>>,
    /// Add the boundary-value estimate (angle sweeps).
    #[arg(long)]
    pub numeric: bool,
    /// [default: 20]
    #[arg(long = "T", alias = "horizon")]
    pub horizon: Option<f64>,
    /// [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Run the certificates for even |p| > 10 (galois sweeps).
    #[arg(long)]
    pub extend: bool,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Simulate(_) => "simulate",
        Command::Angle(_) => "angle",
        Command::Solutions(_) => "solutions",
        Command::Integrals(_) => "integrals",
        Command::Galois(_) => "galois",
        Command::Sweep(_) => "sweep",
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let name = command_name(&cli.command);
    if let Some(c) = &cfg.command {
        if c != name {
            return Err(CliError::Validation(format!("config is for command '{c}', not '{name}'")));
        }
    }
    let bytes = match &cli.command {
        Command::Classify(a) => commands::classify(a, &cfg)?,
        Command::Simulate(a) => commands::simulate(a, &cfg)?,
        Command::Angle(a) => commands::angle(a, &cfg)?,
        Command::Solutions(a) => commands::solutions(a, &cfg)?,
        Command::Integrals(a) => commands::integrals(a, &cfg)?,
        Command::Galois(a) => commands::galois(a, &cfg)?,
        Command::Sweep(a) => commands::sweep(a, &cfg)?,
    };
    match cli.output.or(cfg.output) {
        Some(path) => std::fs::write(&path, bytes)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Validation(format!("cannot write stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("suslov: {e}");
            ExitCode::from(e.code())
        }
    }
}
