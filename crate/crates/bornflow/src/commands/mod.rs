// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Subcommand pipelines and the shared run driver.

mod box_run;
mod chsh_scan;
mod density;
mod fields;
mod spectrum;
mod survival;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use bornflow_core::RealSeries;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{num, OutputDir, RunManifest};
use crate::plot::{line_plot, Series};
use crate::verify::{self, VerifyReport};

pub use chsh_scan::scan_parallel;
pub use spectrum::read_series_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Fields,
    Density,
    Box,
    Spectrum,
    Survival,
    ChshScan,
    Verify,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Fields,
        Command::Density,
        Command::Box,
        Command::Spectrum,
        Command::Survival,
        Command::ChshScan,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Fields => "fields",
            Command::Density => "density",
            Command::Box => "box",
            Command::Spectrum => "spectrum",
            Command::Survival => "survival",
            Command::ChshScan => "chsh-scan",
            Command::Verify => "verify",
        }
    }
}

/// State shared by a running pipeline.
#[derive(Debug)]
pub struct Context<'a> {
    pub cfg: &'a RunConfig,
    pub out: &'a mut OutputDir,
    pub plots: bool,
}

impl Context<'_> {
    fn plot(&mut self, name: &str, title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<()> {
        if self.plots {
            self.out.write(name, line_plot(title, x_label, y_label, series).as_bytes())?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    /// Present for `verify`.
    pub verification: Option<VerifyReport>,
}

/// Runs `command` into `out_dir` on a pool of `threads` workers (the global
/// pool when `None`). Outputs do not depend on the worker count.
///
/// A failing `verify` still writes its outputs; the caller maps
/// [`RunOutcome::verification`] to the exit status.
pub fn run(
    command: Command,
    cfg: &RunConfig,
    out_dir: &Path,
    threads: Option<usize>,
    plots: bool,
) -> Result<RunOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let mut out = OutputDir::create(out_dir)?;
    let mut ctx = Context { cfg, out: &mut out, plots };
    let verification = match threads {
        Some(0) => return Err(CliError::config("--threads", "must be ≥ 1")),
        Some(n) => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| CliError::config("--threads", e))?;
            pool.install(|| dispatch(command, &mut ctx))?
        }
        None => dispatch(command, &mut ctx)?,
    };
    let mut timings = BTreeMap::new();
    timings.insert("total".to_string(), started.elapsed().as_secs_f64() * 1e3);
    let manifest = out.finish(command.name(), cfg, timings)?;
    Ok(RunOutcome { manifest, verification })
}

fn dispatch(command: Command, ctx: &mut Context) -> Result<Option<VerifyReport>> {
    match command {
        Command::Fields => fields::run(ctx)?,
        Command::Density => density::run(ctx)?,
        Command::Box => box_run::run(ctx)?,
        Command::Spectrum => spectrum::run(ctx)?,
        Command::Survival => survival::run(ctx)?,
        Command::ChshScan => chsh_scan::run(ctx)?,
        Command::Verify => {
            let report = verify::run_all();
            verify::write(&report, ctx.out)?;
            return Ok(Some(report));
        }
    }
    Ok(None)
}

/// Long-format rows `t, x, value…` of aligned series.
fn surface_rows<'a>(series: &'a [&'a RealSeries]) -> impl Iterator<Item = Vec<String>> + 'a {
    let first = series[0];
    let nx = first.grid.len();
    (0..first.times.len() * nx).map(move |j| {
        let (k, i) = (j / nx, j % nx);
        let mut row = vec![num(first.times.t(k)), num(first.grid.x(i))];
        row.extend(series.iter().map(|s| num(s.get(k, i))));
        row
    })
}

fn last_slice(s: &RealSeries) -> &[f64] {
    s.slice(s.times.len() - 1)
}
