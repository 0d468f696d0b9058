// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use bornflow_core::memory::noneq_density;
use bornflow_core::spectral::density_spectrum;
use serde::Serialize;

use super::Context;
use crate::error::{CliError, Result};
use crate::output::num;
use crate::plot::Series;
use crate::provider::Provider;

#[derive(Debug, Serialize)]
struct SpectrumSummary {
    source: String,
    window: &'static str,
    samples: usize,
    d_omega: f64,
    /// Frequencies of the five largest |ρ̂| bins, largest first.
    dominant_omega: Vec<f64>,
}

/// Reads a `t,rho` CSV (header required, extra columns ignored).
pub fn read_series_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let bad = |message: String| CliError::Input { path: path.to_path_buf(), message };
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (ti, ri) = (column("t")?, column("rho")?);
    let (mut t, mut rho) = (Vec::new(), Vec::new());
    for (n, record) in reader.records().enumerate() {
        let line = n + 2;
        let record = record.map_err(|e| bad(format!("line {line}: {e}")))?;
        let field = |i: usize, name: &str| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.trim().parse::<f64>().map_err(|_| bad(format!("line {line}: `{name}` is not a number: {raw:?}")))
        };
        t.push(field(ti, "t")?);
        rho.push(field(ri, "rho")?);
    }
    Ok((t, rho))
}

pub(super) fn run(ctx: &mut Context) -> Result<()> {
    let cfg = ctx.cfg;
    let (source, times, values) = match &cfg.spectrum.input {
        Some(path) => {
            let (t, v) = read_series_csv(Path::new(path))?;
            (path.clone(), t, v)
        }
        None => {
            let provider = Provider::from_config(cfg)?;
            let grid = cfg.grid()?;
            let x0 = cfg.spectrum.x0;
            if !grid.contains(x0) {
                return Err(CliError::config("spectrum.x0", format!("{x0} is outside the grid")));
            }
            let d = noneq_density(&provider.history(grid, cfg.times()?)?, cfg.c, cfg.tau, cfg.node_floor)?;
            let t: Vec<f64> = d.density.times.times().collect();
            let v = (0..t.len())
                .map(|k| grid.interpolate(d.density.slice(k), x0).expect("x0 checked against the grid"))
                .collect();
            (format!("{} provider at x0 = {x0}", cfg.provider.name()), t, v)
        }
    };
    let s = density_spectrum(&times, &values, cfg.spectrum.window.into())?;

    ctx.out.write_csv("series.csv", &["t", "rho"], times.iter().zip(&values).map(|(t, v)| vec![num(*t), num(*v)]))?;
    ctx.out.write_csv(
        "spectrum.csv",
        &["omega", "re", "im", "abs"],
        s.omega.iter().zip(&s.rho_hat).map(|(w, z)| vec![num(*w), num(z.re), num(z.im), num(z.norm())]),
    )?;
    ctx.out.write_json(
        "spectrum.json",
        &SpectrumSummary {
            source,
            window: s.window.name(),
            samples: times.len(),
            d_omega: s.d_omega(),
            dominant_omega: s.dominant_bins(5).into_iter().map(|k| s.omega[k]).collect(),
        },
    )?;
    let mag: Vec<f64> = s.rho_hat.iter().map(|z| z.norm()).collect();
    ctx.plot(
        "spectrum.svg",
        "density spectrum",
        "omega",
        "|rho_hat|",
        &[Series { label: "|rho_hat|", x: &s.omega, y: &mag }],
    )?;
    Ok(())
}
