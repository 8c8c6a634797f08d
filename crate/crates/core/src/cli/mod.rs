//! Command-line front end: argument parsing, dispatch and exit codes.
//!
//! Exit code 0 means the analysis ran to completion, whatever its verdict.
//! Input and precondition problems exit with 1, usage errors with 2.

mod commands;
pub mod document;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{run_command, CliError};
pub use document::{FrameDocument, RawDocument};
pub use report::AnalysisReport;

use crate::erasures::NormKind;

#[derive(Debug, Parser)]
#[command(
    name = "fusion-dual",
    version,
    about = "Dual fusion frames and erasure-optimal duals"
)]
pub struct Cli {
    /// Override both rank and residual tolerances.
    #[arg(long, global = true, value_name = "EPS")]
    pub tol: Option<f64>,

    /// Emit the machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Frobenius,
    Operator,
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> NormKind {
        match n {
            NormArg::Frobenius => NormKind::Frobenius,
            NormArg::Operator => NormKind::Operator,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Canonical,
    Dual,
    Tight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    ParsevalFamily,
    Expand,
    Bridge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BridgeArg {
    CanonicalWeighted,
    ParsevalSqrt,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame bounds and structural classification.
    Classify { file: PathBuf },

    /// Check the `dual` section against the frame.
    VerifyDual { file: PathBuf },

    /// Worst-case or fixed-set erasure errors.
    Erasure {
        file: PathBuf,
        /// Number of erasures for the worst-case search.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_enum)]
        norm: NormArg,
        /// Known erasure set, 1-based, comma separated.
        #[arg(long, value_delimiter = ',')]
        fixed: Option<Vec<usize>>,
        /// Work on the vector frame obtained from the fusion frame (zero
        /// vectors removed; indices refer to the remaining vectors).
        #[arg(long)]
        bridged: bool,
        /// Use the canonical dual even when the document has a `dual`.
        #[arg(long)]
        canonical: bool,
        /// Include the value of every subset.
        #[arg(long)]
        table: bool,
    },

    /// Sufficient-condition certificates for optimal duals.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Additionally search this many random duals for a counterexample.
        #[arg(long, value_name = "SAMPLES")]
        probe: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Build frames and duals.
    Construct {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        /// Member to modify for `expand`, 1-based. All members when absent.
        #[arg(long)]
        index: Option<usize>,
        #[arg(long = "bridge-mode", value_enum, default_value = "canonical-weighted")]
        bridge_mode: BridgeArg,
        /// Expand the canonical dual even when the document has a `dual`.
        #[arg(long)]
        canonical: bool,
    },
}

/// Parses `args` (program name first), runs, prints, and maps the outcome to
/// an exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run_command(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
