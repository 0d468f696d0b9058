// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use bornflow_core::memory::{surface_point, KernelPath};
use bornflow_core::systems::{box_equilibrium_density, box_noneq_closed};
use bornflow_core::Error;
use rayon::prelude::*;
use serde::Serialize;

use super::Context;
use crate::error::{CliError, Result};
use crate::output::num;
use crate::plot::Series;
use crate::provider::Provider;

#[derive(Debug, Serialize)]
struct BoxSummary {
    omega: [f64; 2],
    delta_omega: f64,
    beat_period: f64,
    delta_tau: f64,
    c: f64,
    quadrature_points: usize,
    negative_points: usize,
    min_density: f64,
}

pub(super) fn run(ctx: &mut Context) -> Result<()> {
    let cfg = ctx.cfg;
    let Provider::Box(sys) = Provider::from_config(cfg)? else {
        return Err(CliError::config("provider.name", "`box` needs the box provider"));
    };
    let grid = cfg.grid()?;
    let times = cfg.times()?;
    let (c, dtau) = (cfg.c, cfg.box_run.delta_tau);
    let nx = grid.len();
    let points = (0..times.len() * nx)
        .into_par_iter()
        .map(|j| {
            let (t, x) = (times.t(j / nx), grid.x(j % nx));
            let eq = box_equilibrium_density(&sys, x, t);
            match box_noneq_closed(&sys, x, t, dtau, c) {
                Ok(rho) => Ok((eq, rho, "closed")),
                Err(Error::PoleProximity { .. }) => {
                    let p = surface_point(&sys, x, t, t - dtau, c, cfg.node_floor, KernelPath::fixed_point())?;
                    Ok((eq, p.density, "quadrature"))
                }
                Err(e) => Err(e),
            }
        })
        .collect::<bornflow_core::Result<Vec<_>>>()?;

    let rows = points.iter().enumerate().map(|(j, (eq, rho, method))| {
        vec![num(times.t(j / nx)), num(grid.x(j % nx)), num(*eq), num(*rho), method.to_string()]
    });
    ctx.out.write_csv("box.csv", &["t", "x", "rho_eq", "rho", "method"], rows)?;
    let (w1, w2) = sys.omega();
    ctx.out.write_json(
        "box_summary.json",
        &BoxSummary {
            omega: [w1, w2],
            delta_omega: sys.delta_omega(),
            beat_period: sys.beat_period(),
            delta_tau: dtau,
            c,
            quadrature_points: points.iter().filter(|p| p.2 == "quadrature").count(),
            negative_points: points.iter().filter(|p| p.1 < 0.0).count(),
            min_density: points.iter().fold(f64::INFINITY, |m, p| m.min(p.1)),
        },
    )?;

    let xs: Vec<f64> = grid.points().collect();
    let last = &points[points.len() - nx..];
    let rho: Vec<f64> = last.iter().map(|p| p.1).collect();
    let eq: Vec<f64> = last.iter().map(|p| p.0).collect();
    ctx.plot(
        "box.svg",
        &format!("box density at t = {:.4}", times.end()),
        "x",
        "rho",
        &[Series { label: "rho", x: &xs, y: &rho }, Series { label: "rho_eq", x: &xs, y: &eq }],
    )?;
    Ok(())
}
