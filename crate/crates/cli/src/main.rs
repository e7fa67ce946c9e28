use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use gkf_cli::report::{self, Format};
use gkf_cli::verify::{run_suites, Level};
use gkf_cli::workspace::WorkspaceManifest;
use gkf_core::coboundary::{betti_row_with, invariant_bases, Checkpoint, NoCheckpoint};
use gkf_core::dims_row;
use log::info;
use rayon::prelude::*;

/// Relative cohomology of formal Hamiltonian vector fields in the plane:
/// invariant cochain dimensions, differentials and Betti numbers by weight.
#[derive(Parser)]
#[command(name = "gkf", version)]
struct Cli {
    /// Cache directory for invariant bases and differential matrices.
    #[arg(long, global = true, env = "GKF_WORKSPACE")]
    workspace: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "GKF_THREADS")]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// More log output on stderr (-v progress, -vv detail).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of the invariant cochain spaces and the Euler characteristic.
    Dims {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
    /// Dimensions, ranks of d and Betti numbers at one weight.
    Betti {
        #[arg(short = 'w', long = "weight")]
        w: u32,
    },
    /// Invariant basis vectors of every type at one weight and degree.
    Basis {
        #[arg(short = 'w', long = "weight")]
        w: u32,
        #[arg(short = 'm', long = "degree")]
        m: u32,
        /// Print only the number of vectors per type.
        #[arg(long)]
        count_only: bool,
    },
    /// Run the consistency suites; nonzero exit on any failure.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
        /// Also check this weight.
        #[arg(short = 'w', long = "weight")]
        w: Option<u32>,
    },
}

enum Failure {
    Verification(String),
    Internal(String),
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn even(name: &str, w: u32) -> Result<(), Failure> {
    if w.is_multiple_of(2) {
        Ok(())
    } else {
        Err(Failure::Internal(format!(
            "{name} must be even (odd weights carry no invariant cochains), got {w}"
        )))
    }
}

fn execute(cli: &Cli, ws: Option<&WorkspaceManifest>) -> Result<String, Failure> {
    let store: &dyn Checkpoint = match ws {
        Some(w) => w,
        None => &NoCheckpoint,
    };
    match cli.command {
        Command::Dims { from, to } => {
            even("--from", from)?;
            even("--to", to)?;
            let weights: Vec<u32> = (from..=to).step_by(2).collect();
            let rows: Vec<_> = weights.into_par_iter().map(dims_row).collect();
            Ok(report::dims(&rows, cli.format.unwrap_or(Format::Csv)))
        }
        Command::Betti { w } => {
            even("-w", w)?;
            info!("betti w={w}");
            let r = betti_row_with(w, store).map_err(internal)?;
            Ok(report::betti(&r, cli.format.unwrap_or(Format::Csv)))
        }
        Command::Basis { w, m, count_only } => {
            even("-w", w)?;
            let bases = invariant_bases(w, m, store).map_err(internal)?;
            Ok(match (count_only, cli.format) {
                (true, Some(f)) => report::basis_counts(w, m, &bases, f),
                (false, Some(f)) => report::basis_vectors(w, m, &bases, f),
                (true, None) => {
                    let mut s = String::new();
                    for b in bases.iter().filter(|b| !b.vectors.is_empty()) {
                        writeln!(s, "({}): {}", b.signature, b.vectors.len()).unwrap();
                    }
                    let total: usize = bases.iter().map(|b| b.vectors.len()).sum();
                    writeln!(s, "total: {total}").unwrap();
                    s
                }
                (false, None) => report::basis_text(&bases),
            })
        }
        Command::Verify { level, w } => {
            let checks = run_suites(level, w, ws);
            let text = report::verify(&checks, cli.format);
            if checks.iter().all(|c| c.passed) {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Verification("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("gkf: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let ws = match cli
        .workspace
        .as_ref()
        .map(WorkspaceManifest::open)
        .transpose()
    {
        Ok(ws) => ws,
        Err(e) => {
            eprintln!("gkf: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli, ws.as_ref()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("gkf: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("gkf: {msg}");
            ExitCode::from(2)
        }
    }
}
