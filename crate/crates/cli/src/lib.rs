//! Command-line driver: `lift`, `check`, `eigen` and `classify`.
//!
//! Exit codes: 0 success, 1 a check failed or a violation was found, 2 usage
//! or configuration error, 3 internal inconsistency.

pub mod cache;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use cache::Cache;
use commands::{
    cmd_check, cmd_classify, cmd_eigen, cmd_lift, CheckOptions, ClassifyOptions, EigenOptions,
    LiftOptions,
};
pub use report::{Format, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    CheckFailed = 1,
    Usage = 2,
    Internal = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Failure {
            exit,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure::new(Exit::Usage, message)
    }

    pub fn internal(e: impl fmt::Display) -> Self {
        Failure::new(Exit::Internal, e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<sklift::Error> for Failure {
    fn from(e: sklift::Error) -> Self {
        use sklift::Error as E;
        let exit = match &e {
            E::NotEigenform { .. } => Exit::CheckFailed,
            E::Inconsistent(_) | E::DimensionMismatch(_) | E::NoShimuraMatch(_) => Exit::Internal,
            _ => Exit::Usage,
        };
        Failure::new(exit, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sklift",
    version,
    about = "Exact Saito-Kurokawa lifts and their Hecke eigenvalue characterizations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub output: Format,
    /// Cache directory (default: $SKLIFT_CACHE_DIR, then ~/.cache/sklift).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Do not read or write the expansion cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the lift of the weight-(2k-2) eigenform and write its Fourier table.
    Lift {
        #[arg(long)]
        weight: u32,
        /// Fill all reduced indices (n, r, m) with m <= bound.
        #[arg(long, default_value_t = 6)]
        bound: u64,
        /// Table file (default: sk_lift_k<weight>_b<bound>.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test a Fourier table against the Maass relations.
    Check {
        table: PathBuf,
        /// The divisor-sum relation.
        #[arg(long)]
        maass: bool,
        /// The single-prime relation at p (repeatable).
        #[arg(long = "maass-p", value_name = "P")]
        maass_p: Vec<u64>,
        /// Every relation (the default when nothing is selected).
        #[arg(long)]
        all: bool,
    },
    /// Hecke eigenvalues mu(p), mu(p^2) of a Fourier table.
    Eigen {
        table: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        primes: Vec<u64>,
        /// Write the records as JSON lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify eigenvalue records (JSON lines; `-` for stdin).
    Classify {
        records: PathBuf,
        /// Largest exponent r for the growth and sign scans.
        #[arg(long, default_value_t = 100)]
        scan: usize,
    },
}

fn dispatch(cli: Cli, log: &mut dyn Write) -> Result<commands::Outcome, Failure> {
    let cache = if cli.no_cache {
        None
    } else {
        Cache::locate(cli.cache_dir)
    };
    match cli.command {
        Command::Lift { weight, bound, out } => cmd_lift(
            &LiftOptions {
                weight,
                bound,
                out,
                cache,
            },
            log,
        ),
        Command::Check {
            table,
            maass,
            maass_p,
            all,
        } => {
            let (maass, primes) = if all {
                (true, commands::DEFAULT_CHECK_PRIMES.to_vec())
            } else {
                (maass, maass_p)
            };
            cmd_check(&CheckOptions {
                table,
                maass,
                primes,
            })
        }
        Command::Eigen { table, primes, out } => cmd_eigen(&EigenOptions { table, primes, out }),
        Command::Classify { records, scan } => cmd_classify(&ClassifyOptions { records, scan }),
    }
}

/// Parses `args`, runs the command, writes the report to `out` and
/// diagnostics to `err`; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    Exit::Success.code()
                }
                _ => {
                    let _ = write!(err, "{e}");
                    Exit::Usage.code()
                }
            };
        }
    };
    let format = cli.output;
    match dispatch(cli, err) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.report.render(format).as_bytes());
            outcome.exit.code()
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.exit.code()
        }
    }
}
