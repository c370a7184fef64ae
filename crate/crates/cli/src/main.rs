//! `ellgreen`: evaluate, sweep, verify and certify the closed-form Green and
//! Möbius functions of coordinate hyperplanes in complex ellipsoids.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 input or domain error,
//! 3 hypothesis gate refusal.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Outcome, Run, EXIT_INPUT};
use config::Loaded;

#[derive(Debug, Parser)]
#[command(
    name = "ellgreen",
    version,
    about = "Green and Möbius functions of coordinate hyperplanes in complex ellipsoids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Interior slack threshold for eval, sweep and certify; the suite
    /// tolerance for verify.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// One JSON line per point with R, d, region, q_d, r_d, c_d.
    Eval,
    /// CSV of R over a real two-dimensional grid.
    Sweep,
    /// Runs a verification suite and prints JSON-line reports.
    Verify,
    /// Builds extremal certificates for the configured points.
    Certify,
    /// Nonconvex gap demonstration; needs an exponent below 1/2 outside the hyperplane block.
    Gap,
}

fn run(cli: &Cli) -> Outcome {
    let path = cli.config.as_ref().ok_or_else(|| Failure::input("--config <PATH> is required"))?;
    let config = Loaded::from_path(path).map_err(|e| Failure::input(format!("config error at {e}")))?;
    if let Some(t) = cli.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::input(format!("--tol {t} must be finite and non-negative")));
        }
    }
    let run = Run {
        seed: cli.seed.unwrap_or(config.raw.seed),
        tol: cli.tol.or(config.raw.tol),
        out: cli.out.clone(),
        config,
    };
    match cli.command {
        Command::Eval => commands::eval(&run),
        Command::Sweep => commands::sweep(&run),
        Command::Verify => commands::verify(&run),
        Command::Certify => commands::certify(&run),
        Command::Gap => commands::gap(&run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ellgreen: {}", f.message);
            ExitCode::from(if f.code == 0 { EXIT_INPUT } else { f.code })
        }
    }
}
