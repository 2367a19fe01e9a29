//! `qsearch`: run search games, build and check separating systems, evaluate
//! bounds.
//!
//! Exit codes: 0 when every check passes, 1 when a bound or oracle check
//! fails, 2 on usage or configuration errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsearch::separating::{CandidatePool, DEFAULT_MAX_RETRIES};
use qsearch::{Error, DEFAULT_POINT_CAP};

#[derive(Parser, Debug)]
#[command(name = "qsearch", version, about = "Search for a hidden 1-subspace of GF(q)^n")]
struct Cli {
    /// Largest number of projective points an enumeration may touch.
    #[arg(long, global = true, env = "QSEARCH_POINT_CAP", default_value_t = DEFAULT_POINT_CAP)]
    point_cap: u64,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Dims {
    /// Ambient dimension.
    #[arg(long)]
    n: usize,
    /// Field order, a prime power.
    #[arg(long)]
    q: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play adaptive search games.
    Adaptive {
        #[command(flatten)]
        dims: Dims,
        /// plane, inductive, two-round or random.
        #[arg(long)]
        strategy: String,
        /// fixed:all, fixed:<c1,...,cn> or adversary.
        #[arg(long)]
        oracle: String,
        /// Seed for the random strategy.
        #[arg(long)]
        seed: Option<u64>,
        /// Chance of a point query per step for the random strategy, in
        /// thousandths.
        #[arg(long, default_value_t = 0)]
        point_rate: u32,
        /// Query cap per game; defaults to the number of points.
        #[arg(long)]
        limit: Option<usize>,
        /// Save the transcript of a single game as JSON.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build a separating system and write it as a QuerySet file.
    Construct {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, value_enum)]
        method: Method,
        /// Required for the random method.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
        retries: usize,
        /// QuerySet destination; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check whether a QuerySet file separates all points. Prints JSON.
    Verify { file: PathBuf },
    /// Evaluate the closed-form bounds.
    Bounds {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Cross-check formulas against exhaustive computation.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Re-check a saved transcript and regenerate it.
    Replay {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Explicit,
    Random,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Pool {
    Hyperplanes,
    All,
}

impl From<Pool> for CandidatePool {
    fn from(p: Pool) -> Self {
        match p {
            Pool::Hyperplanes => CandidatePool::Hyperplanes,
            Pool::All => CandidatePool::AllProper,
        }
    }
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Compare the pencil pair-count formula with enumeration for every pair.
    ClaimCount {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact minimum separating system by exhaustive search.
    BruteMin {
        #[command(flatten)]
        dims: Dims,
        /// Largest size to try.
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Pool::All)]
        pool: Pool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and failed; the report is still printed.
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotAPrimePower(_)
            | Error::FieldTooLarge { .. }
            | Error::ZeroVector
            | Error::DimensionMismatch { .. }
            | Error::WrongDimension { .. }
            | Error::TooLarge { .. }
            | Error::InvalidArgument(_)
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
