//! `turan`: inverse Markov factors and bounds on planar convex domains.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "turan", version, about = "Inverse Markov factors of polynomials on convex domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Diameter, width, curvature, circularity radius, transfinite diameter.
    Geometry {
        /// Domain descriptor, e.g. `ellipse:b=0.5`.
        domain: String,
        /// Boundary samples per scan.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Every lower/upper bound for degree `n`.
    Bounds {
        domain: String,
        #[arg(long)]
        n: usize,
    },
    /// `M(p)` of a polynomial given as a JSON root file.
    Markov {
        domain: String,
        /// `{"lead": [re, im], "roots": [[re, im], ...]}`.
        polynomial: PathBuf,
        /// Boundary samples of the sup-norm scan.
        #[arg(long, default_value_t = 8192)]
        samples: usize,
        /// Root containment tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Report roots outside the domain instead of failing.
        #[arg(long)]
        allow_outside: bool,
    },
    /// Search for small `M(p)` and certify the result.
    Extremal {
        domain: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total objective evaluations.
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        /// Boundary samples of the search objective.
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        /// Relative slack below the best lower bound before flagging.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        starts: usize,
        /// CSV file for the (evaluation, best) trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Brute-force Chebyshev min-max against `2(|J|/4)^k`.
    Chebyshev {
        /// Largest `k` (1 to 3).
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        v: f64,
        /// Grid points on J (also the candidate nodes).
        #[arg(long, default_value_t = 401)]
        samples: usize,
        /// Maximum number of node tuples.
        #[arg(long, default_value_t = turan_core::bounds::CHEBYSHEV_BUDGET)]
        budget: u64,
    },
    /// Run the acceptance suite; nonzero exit on any failure.
    Verify {
        /// Reduced budgets.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("TURAN_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    match commands::dispatch(cli.command, cli.format, cli.out.as_deref()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
