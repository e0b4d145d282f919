//! `qitool` — command-line front end for the density-matrix entropy
//! calculus: build canonical states, read entropy Venn diagrams, inspect
//! conditional/mutual amplitude operators, and run entanglement checks.
//!
//! Exit codes: 0 success, 1 failed `--expect` check, 2 usage error,
//! 3 unreadable or unphysical data.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "qitool", version, about = "Entropy calculus for density matrices")]
pub struct Cli {
    /// State file to read.
    #[arg(long = "in", value_name = "PATH", global = true)]
    pub input: Option<PathBuf>,

    /// File to write.
    #[arg(long, value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Bipartite split: comma-separated labels, pipe-separated sides,
    /// e.g. "A|B" or "A,B|C".
    #[arg(long, value_name = "SPEC", global = true)]
    pub partition: Option<String>,

    /// Seed for randomized states.
    #[arg(long, value_name = "N", default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AmpKind {
    /// Conditional amplitude operator (quantum analogue of p(a|b)).
    Cond,
    /// Mutual amplitude operator (quantum analogue of p(a)p(b)/p(ab)).
    Mutual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Show {
    Matrix,
    Spectrum,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Entangled,
    Inconclusive,
}

#[derive(Subcommand)]
pub enum Command {
    /// Write a named example state to --out (bell0..bell3, ghz3, caseI,
    /// caseII, mixed).
    Make { name: String },
    /// Print S(A), S(B), S(AB), S(A|B), S(B|A), S(A:B) for a partition.
    Entropy,
    /// Entropy Venn diagram: three regions for two subsystems, seven for
    /// three.
    Diagram,
    /// Conditional or mutual amplitude operator, as matrix and/or spectrum.
    Condmat {
        #[arg(value_enum)]
        kind: AmpKind,
        /// Which part of the operator to print.
        #[arg(long, value_enum, default_value_t = Show::Both)]
        show: Show,
    },
    /// Trace out subsystems, keeping the listed labels, and write the
    /// reduced state to --out.
    Reduce {
        /// Labels to keep, comma separated.
        #[arg(long, value_delimiter = ',', value_name = "LABELS")]
        keep: Vec<String>,
    },
    /// Entropy bounds report and entanglement witness.
    Check {
        /// Fail (exit 1) unless the witness verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Convergence of the finite products toward the conditional amplitude
    /// operator, for n = 1, 2, 4, ... up to --n-max.
    Trotter {
        /// Largest product order; must be a power of two at most 2^20.
        #[arg(long = "n-max", default_value_t = 256)]
        n_max: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(outcome) => {
            if !outcome.payload.is_empty() {
                println!("{}", outcome.payload);
            }
            if let Some(note) = outcome.note {
                eprintln!("{note}");
            }
            ExitCode::from(outcome.exit_code)
        }
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
