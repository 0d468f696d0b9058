// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use bornflow_core::spectral::{
    decay_fit, default_fit_window, gaussian, lorentzian, survival_probability, SampledWeight, SurvivalOptions,
};
use bornflow_core::Complex64;
use serde::Serialize;

use super::Context;
use crate::config::WeightSpec;
use crate::error::Result;
use crate::output::num;
use crate::plot::Series;

#[derive(Debug, Serialize)]
struct FitReport {
    gamma: f64,
    log_intercept: f64,
    deviation: f64,
    non_exponential: bool,
    points: usize,
    window: [f64; 2],
    threshold: f64,
    resolution_change: f64,
    /// `2γ` of a Lorentzian preset.
    lorentzian_rate: Option<f64>,
}

pub(super) fn run(ctx: &mut Context) -> Result<()> {
    let s = &ctx.cfg.survival;
    let weight = match s.weight {
        WeightSpec::Lorentzian { center, gamma } => {
            SampledWeight::sample(|w| Complex64::new(lorentzian(w, center, gamma), 0.0), s.omega_max, s.intervals)?
        }
        WeightSpec::Gaussian { amplitude, center, width } => SampledWeight::sample(
            |w| Complex64::new(gaussian(w, amplitude, center, width), 0.0),
            s.omega_max,
            s.intervals,
        )?,
    };
    let weight = weight.with_constant(s.correction, Complex64::new(s.correction_scale[0], s.correction_scale[1]));
    let times: Vec<f64> = (0..s.samples).map(|j| s.t_max * j as f64 / (s.samples - 1) as f64).collect();
    let series = survival_probability(
        &weight,
        &times,
        SurvivalOptions { normalize: s.normalize, resolution_tol: s.resolution_tol },
    )?;
    let window = match s.fit_window {
        Some([a, b]) => (a, b),
        None => default_fit_window(&series),
    };
    let fit = decay_fit(&series, window, s.threshold)?;

    ctx.out.write_csv(
        "survival.csv",
        &["t", "p"],
        series.times.iter().zip(&series.p).map(|(t, p)| vec![num(*t), num(*p)]),
    )?;
    ctx.out.write_json(
        "fit.json",
        &FitReport {
            gamma: fit.gamma,
            log_intercept: fit.log_intercept,
            deviation: fit.deviation,
            non_exponential: fit.non_exponential,
            points: fit.points,
            window: [window.0, window.1],
            threshold: s.threshold,
            resolution_change: series.resolution_change,
            lorentzian_rate: match s.weight {
                WeightSpec::Lorentzian { gamma, .. } => Some(2.0 * gamma),
                WeightSpec::Gaussian { .. } => None,
            },
        },
    )?;
    let log_p: Vec<f64> = series.p.iter().map(|p| p.ln()).collect();
    ctx.plot(
        "survival.svg",
        "survival probability",
        "t",
        "ln p",
        &[Series { label: "ln p", x: &series.times, y: &log_p }],
    )?;
    Ok(())
}
