// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use bornflow_core::hydro::{
    acceleration_series, continuity_residual, hamilton_jacobi_residual, madelung_decompose, second_order_residual,
    HydroSeries, HydroSlice,
};
use bornflow_core::RealSeries;
use rayon::prelude::*;
use serde::Serialize;

use super::{last_slice, Context};
use crate::error::Result;
use crate::output::{flag, num};
use crate::plot::Series;
use crate::provider::Provider;

#[derive(Debug, Serialize)]
struct ResidualSummary {
    provider: &'static str,
    points: usize,
    times: usize,
    node_samples: usize,
    continuity_max_abs: f64,
    hamilton_jacobi_max_abs: f64,
    second_order_max_abs: f64,
}

pub(super) fn run(ctx: &mut Context) -> Result<()> {
    let cfg = ctx.cfg;
    let params = cfg.params();
    let provider = Provider::from_config(cfg)?;
    let grid = cfg.grid()?;
    let history = provider.history(grid, cfg.times()?)?;
    let slices = (0..history.times.len())
        .into_par_iter()
        .map(|k| madelung_decompose(&history.field(k), &params, cfg.node_floor))
        .collect::<bornflow_core::Result<Vec<HydroSlice>>>()?;
    let hydro = HydroSeries::from_slices(&history, &slices)?;
    let potential = provider.potential(&grid);
    let vdot = acceleration_series(&hydro.quantum_potential, &potential, &params)?;

    let summary = ResidualSummary {
        provider: cfg.provider.name(),
        points: grid.len(),
        times: history.times.len(),
        node_samples: hydro.node_mask.iter().filter(|m| **m).count(),
        continuity_max_abs: continuity_residual(&hydro.rho_eq, &hydro.velocity)?.max_abs,
        hamilton_jacobi_max_abs: hamilton_jacobi_residual(
            &hydro.phase,
            &hydro.velocity,
            &hydro.quantum_potential,
            &potential,
            &params,
        )?
        .max_abs,
        second_order_max_abs: second_order_residual(&hydro.rho_eq, &hydro.velocity, &vdot)?.max_abs,
    };

    let fields: [(&str, &RealSeries); 4] = [
        ("rho_eq", &hydro.rho_eq),
        ("phase", &hydro.phase),
        ("velocity", &hydro.velocity),
        ("quantum_potential", &hydro.quantum_potential),
    ];
    for (name, series) in fields {
        let nx = grid.len();
        let rows = (0..series.times.len() * nx).map(|j| {
            let (k, i) = (j / nx, j % nx);
            vec![num(series.times.t(k)), num(grid.x(i)), num(series.get(k, i)), flag(hydro.node_mask[j])]
        });
        ctx.out.write_csv(&format!("{name}.csv"), &["t", "x", name, "node"], rows)?;
    }
    ctx.out.write_json("residuals.json", &summary)?;

    let xs: Vec<f64> = grid.points().collect();
    for (name, series) in fields {
        ctx.plot(
            &format!("{name}.svg"),
            &format!("{name} at t = {:.4}", series.times.end()),
            "x",
            name,
            &[Series { label: name, x: &xs, y: last_slice(series) }],
        )?;
    }
    Ok(())
}
