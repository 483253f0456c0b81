//! Command-line front end for `qhier-core`: verification campaigns over the
//! hierarchy identities and evolution runs on sequences read from JSON.

pub mod config;
pub mod error;
pub mod evolve;
pub mod io;
pub mod report;
pub mod suites;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::Format;
use crate::evolve::{EvolveArgs, FormulaArg, HierarchyArg};
use crate::verify::VerifyArgs;

#[derive(Debug, Parser)]
#[command(name = "qhier", version, about = "Quantum hierarchy verification and evolution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and emit a report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Evolve a sequence and write it at each requested time.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        formula: FormulaArg,
        #[arg(long, value_enum)]
        hierarchy: Option<HierarchyArg>,
        #[arg(long = "time", allow_negative_numbers = true)]
        times: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Exit status: 0 all checks passed, 1 a check failed, 2 config or IO error.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Verify {
            config,
            suites,
            seed,
            out,
            format,
        } => verify::cmd_verify(&VerifyArgs {
            config,
            suites,
            seed,
            out,
            format,
        }),
        Command::Evolve {
            config,
            state,
            formula,
            hierarchy,
            times,
            out,
        } => evolve::cmd_evolve(&EvolveArgs {
            config,
            state,
            formula,
            hierarchy,
            times,
            out,
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
