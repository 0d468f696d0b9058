// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use bornflow::error::EXIT_VERIFICATION;
use bornflow::{CliError, Command, RunConfig};
use clap::{Parser, Subcommand};

/// Non-equilibrium quantum densities from a memory-kernel solution.
#[derive(Debug, Parser)]
#[command(name = "bornflow", version)]
struct Cli {
    /// JSON run configuration; defaults apply to omitted keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "bornflow-out")]
    out: PathBuf,
    /// Worker threads. Outputs do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write SVG line plots.
    #[arg(long, global = true)]
    plots: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Hydrodynamic fields and residual summaries.
    Fields,
    /// Memory-kernel density surface and negativity report.
    Density {
        /// Also evaluate the self-consistent exponential form.
        #[arg(long)]
        exponential: bool,
    },
    /// Closed-form box superposition density.
    Box,
    /// Spectrum of a density time series.
    Spectrum {
        /// CSV with columns t,rho; overrides the configuration.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Survival probability of a spectral weight and its decay fit.
    Survival,
    /// Temporal CHSH parameter scan.
    ChshScan,
    /// Runs every invariant suite and prints a pass/fail table.
    Verify,
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let command = match cli.command {
        Cmd::Fields => Command::Fields,
        Cmd::Density { exponential } => {
            cfg.density.exponential |= exponential;
            Command::Density
        }
        Cmd::Box => Command::Box,
        Cmd::Spectrum { input } => {
            if let Some(p) = input {
                cfg.spectrum.input = Some(p.to_string_lossy().into_owned());
            }
            Command::Spectrum
        }
        Cmd::Survival => Command::Survival,
        Cmd::ChshScan => Command::ChshScan,
        Cmd::Verify => Command::Verify,
    };
    let outcome = bornflow::run(command, &cfg, &cli.out, cli.threads, cli.plots)?;
    if let Some(report) = &outcome.verification {
        print!("{}", report.table());
        if report.failed() > 0 {
            let e = CliError::Verification { failed: report.failed(), total: report.results.len() };
            eprintln!("error: {e}");
            return Ok(ExitCode::from(EXIT_VERIFICATION));
        }
    }
    println!("{}: wrote {} files to {}", command.name(), outcome.manifest.outputs.len(), cli.out.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
