//! `wharf`: command-line front end for axiom verification, category
//! compilation, fixed-point checks and anomaly diagnostics.
//!
//! Exit codes: 0 all checks pass, 1 some check failed or the input is
//! unsupported, 2 usage or input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "wharf", version, about = "Weak Hopf algebra MPO symmetry toolkit")]
pub struct Cli {
    /// Print the report as JSON instead of a table.
    #[arg(long, global = true, env = "WHARF_JSON")]
    pub json: bool,

    /// Also write the JSON report to this file.
    #[arg(long, global = true, env = "WHARF_REPORT")]
    pub report: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every weak Hopf algebra axiom on a wha.json table.
    VerifyWha {
        #[arg(long, env = "WHARF_ALGEBRA")]
        algebra: PathBuf,
        #[arg(long, env = "WHARF_TOL", default_value_t = 1e-10)]
        tol: f64,
    },
    /// Validate fusion category data and compile it to a wha.json table.
    Compile {
        #[arg(long, env = "WHARF_FUSION")]
        fusion: PathBuf,
        #[arg(long, env = "WHARF_FSYMBOLS")]
        fsymbols: PathBuf,
        #[arg(long, env = "WHARF_OUT")]
        out: PathBuf,
        #[arg(long, env = "WHARF_TOL", default_value_t = 1e-9)]
        tol: f64,
    },
    /// Fusion, fixed-point, trace-out and purification checks of the MPO
    /// symmetry built from an algebra.
    Rfp {
        #[arg(long, env = "WHARF_ALGEBRA")]
        algebra: PathBuf,
        /// Comma-separated chain lengths.
        #[arg(long = "L", env = "WHARF_L", value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long, env = "WHARF_TOL", default_value_t = 1e-9)]
        tol: f64,
        /// Fixed point index, or `all`.
        #[arg(long, env = "WHARF_M", default_value = "all")]
        m: String,
        /// Write the dense fixed points at the smallest length as a
        /// rank-3 tensor `[m, D, D]`.
        #[arg(long, env = "WHARF_DUMP")]
        dump: Option<PathBuf>,
    },
    /// Integrality of Frobenius-Perron dimensions, or periodicity of an
    /// eigenvalue sequence.
    Anomaly {
        #[arg(long, env = "WHARF_FUSION", conflicts_with = "sequence", required_unless_present = "sequence")]
        fusion: Option<PathBuf>,
        /// Text file, one value per line: `re` or `re im`.
        #[arg(long, env = "WHARF_SEQUENCE")]
        sequence: Option<PathBuf>,
        /// Largest recurrence order tried; defaults to half the sample count.
        #[arg(long, env = "WHARF_MAX_ORDER")]
        max_order: Option<usize>,
        /// Least-squares threshold of the recurrence fit.
        #[arg(long, env = "WHARF_TOL", default_value_t = 1e-9)]
        tol: f64,
        /// Distance from an integer still counted as integral.
        #[arg(long, env = "WHARF_INTEGER_TOL", default_value_t = wharf::anomaly::INTEGER_TOL)]
        integer_tol: f64,
    },
    /// Write the built-in Fibonacci data.
    EmitFib {
        #[arg(long, env = "WHARF_OUT")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FibKind::Wha)]
        kind: FibKind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FibKind {
    Wha,
    Fusion,
    Fsymbols,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("wharf: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
