use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::Value;

use rpaving_core::scalar::parse_rational;
use rpaving_core::{Error, Mode};

#[derive(Parser, Debug)]
#[command(
    name = "rpaving",
    version,
    about = "r-characteristic polynomials, pavings and barrier bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: GlobalArgs,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// det_r of a matrix by every applicable method.
    Detr,
    /// chi_r of a matrix with its real roots.
    Chir,
    /// Paving sum of characteristic polynomials and the best paving.
    Pavings,
    /// Root bounds from the diagonal or from a matrix.
    Bound,
    /// Run the identity suite on seeded random matrices.
    Verify,
    /// Counterexample or paving search.
    Search {
        #[arg(value_enum)]
        kind: SearchKind,
    },
    /// Strongly Rayleigh measure of a PSD matrix, or the paving measure.
    Stability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    Statement,
    Paving,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Matrix JSON file.
    #[arg(long, global = true)]
    pub matrix: Option<PathBuf>,
    /// The parameter r (integer or rational, e.g. 2 or 3/2).
    #[arg(long, global = true, default_value = "2")]
    pub r: String,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Trial budget for searches and stability tests.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Comparison tolerance in float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Also compute the largest root of chi_r.
    #[arg(long, global = true)]
    pub certify: bool,
    /// Diagonal bound for closed-form root bounds.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Dimension for generated instances.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Use local search instead of enumeration.
    #[arg(long, global = true)]
    pub greedy: bool,
    /// Corrupt one identity check to exercise failure reporting.
    #[arg(long, global = true, hide = true)]
    pub fault: Option<String>,
}

/// Validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub matrix: Option<PathBuf>,
    pub r: BigRational,
    pub mode: Mode,
    pub seed: u64,
    pub budget: Option<u64>,
    pub threads: usize,
    pub tolerance: f64,
    pub output: OutputFormat,
    pub certify: bool,
    pub delta: Option<f64>,
    pub n: Option<usize>,
    pub greedy: bool,
    pub fault: Option<String>,
}

impl GlobalArgs {
    pub fn validate(&self) -> Result<RunConfig, CliError> {
        let r = parse_rational(&self.r).map_err(CliError::from)?;
        if r < BigRational::from_integer(1.into()) {
            return Err(CliError::Input(format!("r must be at least 1, got {}", self.r)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(CliError::Input("tolerance must be positive".into()));
        }
        if self.threads == 0 {
            return Err(CliError::Input("threads must be at least 1".into()));
        }
        if self.budget == Some(0) {
            return Err(CliError::Input("budget must be at least 1".into()));
        }
        Ok(RunConfig {
            matrix: self.matrix.clone(),
            r,
            mode: match self.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            },
            seed: self.seed,
            budget: self.budget,
            threads: self.threads,
            tolerance: self.tolerance,
            output: self.output,
            certify: self.certify,
            delta: self.delta,
            n: self.n,
            greedy: self.greedy,
            fault: self.fault.clone(),
        })
    }
}

impl RunConfig {
    /// `r` as a positive integer, or an input error.
    pub fn r_integer(&self) -> Result<usize, CliError> {
        if !self.r.is_integer() {
            return Err(CliError::Input(format!(
                "this command needs an integer r, got {}",
                self.r
            )));
        }
        self.r
            .to_integer()
            .try_into()
            .map_err(|_| CliError::Limit(format!("r = {} is too large", self.r)))
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input or arguments (exit 2).
    Input(String),
    /// Size or budget limit (exit 3).
    Limit(String),
    /// Internal cross-check failure (exit 1).
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Limit(m) | CliError::Check(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => CliError::Limit(e.to_string()),
            Error::CrossCheck(_) => CliError::Check(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// A command's result: the JSON document, flat rows for CSV output, and
/// whether any check failed.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub rows: Option<Vec<Vec<String>>>,
    pub failed: bool,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json,
            rows: None,
            failed: false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        u8::from(self.failed)
    }
}
