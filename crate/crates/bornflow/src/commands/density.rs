// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use bornflow_core::memory::{noneq_density, noneq_density_exp, positivity_scan, NegativeOnset};
use serde::Serialize;

use super::{last_slice, surface_rows, Context};
use crate::error::Result;
use crate::output::flag;
use crate::plot::Series;
use crate::provider::Provider;

#[derive(Debug, Serialize)]
struct Onset {
    t: f64,
    x: f64,
    grid_index: usize,
    time_index: usize,
    value: f64,
}

impl From<NegativeOnset> for Onset {
    fn from(o: NegativeOnset) -> Self {
        Onset { t: o.t, x: o.x, grid_index: o.grid_index, time_index: o.time_index, value: o.value }
    }
}

#[derive(Debug, Serialize)]
struct NegativityReport {
    c: f64,
    tau: f64,
    negative: bool,
    /// Interpolated zero crossing of the earliest negative point.
    earliest: Option<Onset>,
    /// First sample time holding a negative density.
    first_negative_sample: Option<f64>,
    min_density: f64,
    skipped_regularized: usize,
}

#[derive(Debug, Serialize)]
struct KernelReport {
    c: f64,
    tau: f64,
    samples: usize,
    regularized_samples: usize,
    max_kernel: f64,
}

#[derive(Debug, Serialize)]
struct ExpComparison {
    c: f64,
    iterations: usize,
    max_abs_difference: f64,
}

pub(super) fn run(ctx: &mut Context) -> Result<()> {
    let cfg = ctx.cfg;
    let provider = Provider::from_config(cfg)?;
    let history = provider.history(cfg.grid()?, cfg.times()?)?;
    let d = noneq_density(&history, cfg.c, cfg.tau, cfg.node_floor)?;
    let scan = positivity_scan(&d);

    let nx = d.density.grid.len();
    let columns = [&d.density, &d.equilibrium, &d.kernel];
    let rows = surface_rows(&columns).zip(&d.regularized).map(|(mut row, r)| {
        row.push(flag(*r));
        row
    });
    ctx.out.write_csv("density.csv", &["t", "x", "rho", "rho_eq", "kernel", "regularized"], rows)?;
    ctx.out.write_json(
        "negativity.json",
        &NegativityReport {
            c: cfg.c,
            tau: cfg.tau,
            negative: scan.earliest.is_some(),
            earliest: scan.earliest.map(Onset::from),
            first_negative_sample: d.negativity_time,
            min_density: scan.min_density,
            skipped_regularized: scan.skipped,
        },
    )?;
    ctx.out.write_json(
        "kernel.json",
        &KernelReport {
            c: cfg.c,
            tau: cfg.tau,
            samples: d.kernel.values().len(),
            regularized_samples: d.regularized.iter().filter(|r| **r).count(),
            max_kernel: d.kernel.values().iter().fold(0.0_f64, |m, v| m.max(*v)),
        },
    )?;

    if cfg.density.exponential {
        let e = noneq_density_exp(&history, cfg.c, cfg.tau, cfg.node_floor, cfg.density.max_iter, cfg.density.fp_tol)?;
        let diff = e.density.zip_with(&d.density, |a, b| a - b)?;
        ctx.out.write_csv(
            "density_exp.csv",
            &["t", "x", "rho_exp", "rho", "difference"],
            surface_rows(&[&e.density, &d.density, &diff]),
        )?;
        ctx.out.write_json(
            "exp_comparison.json",
            &ExpComparison { c: cfg.c, iterations: e.iterations, max_abs_difference: diff.max_abs() },
        )?;
    }

    let xs: Vec<f64> = d.density.grid.points().collect();
    debug_assert_eq!(xs.len(), nx);
    ctx.plot(
        "density.svg",
        &format!("density at t = {:.4}", d.density.times.end()),
        "x",
        "rho",
        &[
            Series { label: "rho", x: &xs, y: last_slice(&d.density) },
            Series { label: "rho_eq", x: &xs, y: last_slice(&d.equilibrium) },
        ],
    )?;
    Ok(())
}
