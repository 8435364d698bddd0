//! `ghmtq`: configuration-driven verification and analysis runs.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 for
//! configuration or usage errors.

mod commands;
mod config;
mod custom;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "ghmtq", version, about = "Frame geometry and quantization checks for generalized harmonic maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Io {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for report.json, timing.json and field dumps.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Field equations, identities and closed-form oracles of a family.
    Verify(Io),
    /// Connection, curvature and Ricci scalar over a grid, dumped to CSV.
    Analyze(Io),
    /// Euler characteristic of a region by Gauss-Bonnet.
    Euler(Io),
    /// Parameter sweep looking for quantization conditions.
    Scan(Io),
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let (name, io) = match &cli.command {
        Command::Verify(io) => ("verify", io),
        Command::Analyze(io) => ("analyze", io),
        Command::Euler(io) => ("euler", io),
        Command::Scan(io) => ("scan", io),
    };
    let cfg = RunConfig::load(&io.config)?;
    let start = Instant::now();
    let report = match cli.command {
        Command::Verify(_) => commands::verify(&cfg)?,
        Command::Analyze(_) => commands::analyze(&cfg, &io.out)?,
        Command::Euler(_) => commands::euler(&cfg)?,
        Command::Scan(_) => commands::scan(&cfg)?,
    };
    let secs = start.elapsed().as_secs_f64();
    report.write(&io.out, secs)?;
    report.print_summary();
    let code = report.exit_code();
    let verdict = if code == 0 { "all checks pass" } else { "some checks fail" };
    let _ = writeln!(std::io::stdout(), "{name}: {verdict} ({secs:.2} s)");
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if e.downcast_ref::<ConfigError>().is_some() {
                eprintln!("ghmtq: configuration error: {e}");
            } else {
                eprintln!("ghmtq: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}
