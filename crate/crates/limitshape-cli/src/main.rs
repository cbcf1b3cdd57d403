//! `limitshape`: exact dimensions, samplers, limit surfaces and the
//! pre-registered verification suites from the command line.
//!
//! Exit codes: 0 success, 1 a verification failure or I/O error,
//! 2 invalid arguments, 3 a computation over its budget.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use limitshape::diagrams::DEFAULT_EXACT_THRESHOLD;

#[derive(Parser, Debug)]
#[command(name = "limitshape", version, about = "Limit shapes of random square Young tableaux")]
pub struct Cli {
    /// Worker threads for Monte Carlo work. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// RNG seed. Falls back to $LIMITSHAPE_SEED, then to a random seed
    /// (logged). `verify` falls back to the registered fixture seeds.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Omit the timestamp header line and run times, so that reruns are
    /// byte-identical.
    #[arg(long, global = true)]
    pub no_header: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format. Each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Exact,
    Variational,
    Montecarlo,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TierArg {
    Small,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of standard tableaux of a shape.
    Dim {
        /// The n × n square.
        #[arg(long, conflicts_with = "shape", required_unless_present = "shape")]
        square: Option<usize>,
        /// Row lengths, comma separated, e.g. 3,2,1.
        #[arg(long, value_delimiter = ',')]
        shape: Vec<usize>,
        /// Largest size computed exactly; beyond it only ln d is given.
        #[arg(long, default_value_t = DEFAULT_EXACT_THRESHOLD)]
        exact_threshold: usize,
    },
    /// A uniform standard tableau of the n × ⌊θn⌉ rectangle.
    SampleTableau {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
    },
    /// A uniform plane partition of m with distinct parts on the n × n square.
    SamplePp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// The limit surface L_θ(x, y), or M_θ = -ln L_θ with --pp.
    Surface {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        /// Evaluate the plane partition surface M_θ instead.
        #[arg(long)]
        pp: bool,
    },
    /// A level curve in rotated coordinates, on N + 1 equally spaced nodes.
    LevelCurve {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long = "N", default_value_t = 200)]
        grid: usize,
    },
    /// Rescaled entries (i/n, j/n, t/n²) of sampled square tableaux next
    /// to L at the same points.
    ContourData {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Run a pre-registered verification suite and emit one report per line.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = TierArg::Small)]
        tier: TierArg,
        /// Shorthand for --tier full.
        #[arg(long)]
        full: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, commands::CliError::VerifyFailed(_)) {
                eprintln!("limitshape: error: {e}");
            } else {
                eprintln!("limitshape: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
