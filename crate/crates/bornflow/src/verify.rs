// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! The built-in verification suite: one check per module invariant.

use std::fmt::Write as _;

use bornflow_core::chsh::{
    chsh_lhs, delta_tau_limit_trace, scan_points, windowed_density, ChshConvention, ChshOptions, ChshParams,
    ConventionTag, ScanRanges, ScanResult,
};
use bornflow_core::hydro::{
    acceleration_series, continuity_residual, decompose_history, exponential_solution_check, integrate_trajectory,
    madelung_decompose, quantum_potential, quantum_potential_alt, second_order_residual, HydroSeries,
};
use bornflow_core::memory::{noneq_density, noneq_density_exp, noneq_surface, surface_point, KernelPath};
use bornflow_core::spectral::{
    decay_fit, density_spectrum, lorentzian, principal_value, sokhotski_plemelj, survival_probability, PoleModel,
    PoleSign, PvOptions, SampledWeight, SurvivalOptions, Window, NON_EXPONENTIAL_THRESHOLD,
};
use bornflow_core::systems::{
    box_equilibrium_density, box_noneq_closed, dyson_density, evolve_numeric, BoxSystem, GaussianPacket,
    HamiltonianSpec, StationaryState,
};
use bornflow_core::{
    Complex64, ComplexField, FieldHistory, Grid1D, PhysicalParams, TimeGrid, WaveFunction, DEFAULT_NODE_FLOOR,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{self, scan_parallel, Command};
use crate::config::{Axis, ProviderSpec, RunConfig};
use crate::error::Result;
use crate::output::{OutputDir, RunManifest};

/// Result of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Check { passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Suite {
    /// Invariant key, `module.invariant`.
    pub name: &'static str,
    pub module: &'static str,
    run: fn() -> Result<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub module: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub results: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.results.iter().filter(|r| !r.passed).count()
    }

    /// Plain-text pass/fail table keyed by invariant name.
    pub fn table(&self) -> String {
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        let _ = writeln!(s, "{:<width$}  {:<16}  result  detail", "invariant", "module");
        for r in &self.results {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{:<width$}  {:<16}  {:<6}  {}", r.name, r.module, verdict, r.detail);
        }
        let _ = writeln!(s, "{} passed, {} failed", self.results.len() - self.failed(), self.failed());
        s
    }
}

pub const SUITES: &[Suite] = &[
    Suite { name: "hydro.continuity_order", module: "hydro-core", run: hydro_continuity_order },
    Suite { name: "hydro.quantum_potential_forms", module: "hydro-core", run: hydro_quantum_potential_forms },
    Suite { name: "hydro.second_order_residual_order", module: "hydro-core", run: hydro_second_order_order },
    Suite { name: "hydro.madelung_roundtrip", module: "hydro-core", run: hydro_madelung_roundtrip },
    Suite { name: "hydro.exponential_check_convergence", module: "hydro-core", run: hydro_exponential_check },
    Suite { name: "memory.equilibrium_reduction", module: "memory-density", run: memory_equilibrium_reduction },
    Suite { name: "memory.kernel_monotone", module: "memory-density", run: memory_kernel_monotone },
    Suite { name: "memory.solution_property", module: "memory-density", run: memory_solution_property },
    Suite { name: "memory.order_c_squared", module: "memory-density", run: memory_order_c_squared },
    Suite { name: "memory.stationary_identity", module: "memory-density", run: memory_stationary_identity },
    Suite { name: "systems.closed_form_vs_quadrature", module: "analytic-systems", run: systems_closed_form },
    Suite { name: "systems.provider_residuals", module: "analytic-systems", run: systems_provider_residuals },
    Suite { name: "systems.evolver_norm", module: "analytic-systems", run: systems_evolver_norm },
    Suite { name: "systems.dyson_order", module: "analytic-systems", run: systems_dyson_order },
    Suite { name: "spectral.linearity", module: "spectral", run: spectral_linearity },
    Suite { name: "spectral.pv_reflection", module: "spectral", run: spectral_pv_reflection },
    Suite { name: "spectral.survival_classification", module: "spectral", run: spectral_survival },
    Suite { name: "spectral.sokhotski_plemelj", module: "spectral", run: spectral_sokhotski_plemelj },
    Suite { name: "chsh.zero_window_exact", module: "temporal-chsh", run: chsh_zero_window },
    Suite { name: "chsh.stationary_lhs", module: "temporal-chsh", run: chsh_stationary_lhs },
    Suite { name: "chsh.scan_invariance", module: "temporal-chsh", run: chsh_scan_invariance },
    Suite { name: "chsh.record_reproducible", module: "temporal-chsh", run: chsh_record_reproducible },
    Suite { name: "cli.deterministic_outputs", module: "cli", run: cli_deterministic_outputs },
    Suite { name: "cli.manifest_reproduces", module: "cli", run: cli_manifest_reproduces },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

pub fn run_suite(s: &Suite) -> SuiteResult {
    let check = (s.run)().unwrap_or_else(|e| Check::new(false, format!("error: {e}")));
    SuiteResult { name: s.name, module: s.module, passed: check.passed, detail: check.detail }
}

/// Runs every suite on the current pool; results keep suite order.
pub fn run_all() -> VerifyReport {
    VerifyReport { results: SUITES.par_iter().map(run_suite).collect() }
}

pub fn write(report: &VerifyReport, out: &mut OutputDir) -> Result<()> {
    let rows = report.results.iter().map(|r| {
        vec![
            r.name.to_string(),
            r.module.to_string(),
            (if r.passed { "pass" } else { "fail" }).to_string(),
            r.detail.clone(),
        ]
    });
    out.write_csv("verify.csv", &["invariant", "module", "result", "detail"], rows)?;
    out.write_json("verify.json", report)
}

fn unit() -> PhysicalParams {
    PhysicalParams::default()
}

fn beat_box() -> BoxSystem {
    BoxSystem::new(1.0, 1, 2, unit()).expect("valid box")
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", items.join(", "))
}

fn ratios(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| w[0] / w[1]).collect()
}

/// Passes when every successive error ratio lies in `[lo, hi]`.
fn order(errs: &[f64], lo: f64, hi: f64) -> Check {
    let r = ratios(errs);
    Check::new(r.iter().all(|q| (lo..=hi).contains(q)), format!("errors {} ratios {}", list(errs), list(&r)))
}

/// Deterministic points in `[0,1)^d` (additive recurrence).
fn lattice(n: usize, d: usize) -> Vec<Vec<f64>> {
    let alphas = [0.618_033_988_749_894_9, 0.754_877_666_246_692_7, 0.569_840_290_998_053_3];
    (1..=n).map(|k| (0..d).map(|j| (k as f64 * alphas[j]).fract()).collect()).collect()
}

const BOX_LEVELS: [(usize, f64); 3] = [(73, 0.002), (145, 0.001), (289, 0.0005)];
const BOX_WINDOW: ((f64, f64), (f64, f64)) = ((0.1, 0.9), (0.07, 0.15));
const GAUSS_LEVELS: [(usize, f64); 3] = [(141, 0.02), (281, 0.01), (561, 0.005)];

fn box_level(nx: usize, dt: f64) -> Result<(FieldHistory, HydroSeries)> {
    let grid = Grid1D::new(0.05, 0.95, nx)?;
    let times = TimeGrid::new(0.04, dt, (0.14 / dt).round() as usize + 1)?;
    let h = FieldHistory::from_provider(&beat_box(), grid, times)?;
    let hydro = decompose_history(&h, &unit(), DEFAULT_NODE_FLOOR)?;
    Ok((h, hydro))
}

fn gaussian_level(nx: usize, dt: f64, k0: f64) -> Result<HydroSeries> {
    let p = GaussianPacket::new(1.0, k0, 0.0, unit())?;
    let grid = Grid1D::new(-7.0, 7.0, nx)?;
    let times = TimeGrid::new(0.0, dt, (1.0 / dt).round() as usize + 1)?;
    Ok(decompose_history(&FieldHistory::from_provider(&p, grid, times)?, &unit(), DEFAULT_NODE_FLOOR)?)
}

fn hydro_continuity_order() -> Result<Check> {
    let errs = BOX_LEVELS
        .par_iter()
        .map(|&(nx, dt)| {
            let (_, h) = box_level(nx, dt)?;
            Ok(continuity_residual(&h.rho_eq, &h.velocity)?.max_abs_within(BOX_WINDOW.0, BOX_WINDOW.1))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(order(&errs, 3.0, 5.0))
}

/// Largest `|Q − Q_alt| / max|Q|` over points with `ρ > 10·floor`, in units of `h²`.
fn q_form_coefficient(grid: &Grid1D, rho: &[f64]) -> Result<f64> {
    let floor = DEFAULT_NODE_FLOOR;
    let a = quantum_potential(grid, rho, &unit(), floor)?;
    let b = quantum_potential_alt(grid, rho, &unit(), floor)?;
    let keep = |i: usize| rho[i] > 10.0 * floor;
    let scale = (0..rho.len()).filter(|&i| keep(i)).fold(0.0_f64, |m, i| m.max(a.values[i].abs()));
    let gap = (0..rho.len()).filter(|&i| keep(i)).fold(0.0_f64, |m, i| m.max((a.values[i] - b.values[i]).abs()));
    Ok(gap / scale / grid.spacing().powi(2))
}

fn hydro_quantum_potential_forms() -> Result<Check> {
    let g = Grid1D::new(-7.0, 7.0, 961)?;
    let gauss: Vec<f64> = g.points().map(|x| (-x * x / 2.0).exp()).collect();
    let cg = q_form_coefficient(&g, &gauss)?;
    let sys = beat_box();
    let t = std::f64::consts::FRAC_PI_2 / sys.delta_omega();
    let b = Grid1D::new(0.0, 1.0, 201)?;
    let rho: Vec<f64> = b.points().map(|x| box_equilibrium_density(&sys, x, t)).collect();
    let cb = q_form_coefficient(&b, &rho)?;
    Ok(Check::new(
        cg <= 10.0 && cb <= 10.0,
        format!("max gap / (max|Q| h²): gaussian {cg:.3e}, box {cb:.3e} (limit 10)"),
    ))
}

fn hydro_second_order_order() -> Result<Check> {
    let errs = BOX_LEVELS
        .par_iter()
        .map(|&(nx, dt)| {
            let (_, h) = box_level(nx, dt)?;
            let vdot = acceleration_series(&h.quantum_potential, &vec![0.0; nx], &unit())?;
            Ok(second_order_residual(&h.rho_eq, &h.velocity, &vdot)?.max_abs_within(BOX_WINDOW.0, BOX_WINDOW.1))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(order(&errs, 3.0, 5.0))
}

fn roundtrip_error(w: &dyn WaveFunction, grid: Grid1D, t: f64) -> Result<f64> {
    let psi = ComplexField::sample(grid, t, |x| w.psi(x, t))?;
    let s = madelung_decompose(&psi, &unit(), DEFAULT_NODE_FLOOR)?;
    let back = s.reconstruct(&unit());
    let first = s.node_mask.iter().position(|m| !m).expect("decomposition has a non-node point");
    let g = psi.values()[first] / back[first];
    let g = g / g.norm();
    Ok((0..grid.len()).filter(|&i| !s.node_mask[i]).map(|i| (back[i] * g - psi.values()[i]).norm()).fold(0.0, f64::max))
}

fn hydro_madelung_roundtrip() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.13, 0.31] {
        worst = worst.max(roundtrip_error(&beat_box(), Grid1D::new(0.0, 1.0, 201)?, t)?);
        worst =
            worst.max(roundtrip_error(&GaussianPacket::new(1.0, 1.5, 0.0, unit())?, Grid1D::new(-7.0, 7.0, 281)?, t)?);
    }
    Ok(Check::new(worst < 1e-10, format!("max error {worst:.3e} (limit 1e-10)")))
}

fn hydro_exponential_check() -> Result<Check> {
    let errs = GAUSS_LEVELS
        .par_iter()
        .map(|&(nx, dt)| {
            let h = gaussian_level(nx, dt, 0.5)?;
            let n = h.velocity.times.len() - 1;
            let mut worst: f64 = 0.0;
            for x0 in [-1.0, 0.4, 1.3] {
                let tr = integrate_trajectory(x0, &h.velocity, n)?;
                worst =
                    worst.max(exponential_solution_check(&h.rho_eq, &h.velocity, &tr, DEFAULT_NODE_FLOOR)?.discrepancy);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(order(&errs, 3.0, 5.0))
}

fn memory_equilibrium_reduction() -> Result<Check> {
    let grid = Grid1D::new(0.0, 1.0, 65)?;
    let times = TimeGrid::new(0.0, 0.01, 101)?;
    let mut worst: f64 = 0.0;
    let providers: [&dyn WaveFunction; 2] = [&beat_box(), &StationaryState::new(2, 1.0, unit())?];
    for w in providers {
        let h = FieldHistory::from_provider(w, grid, times)?;
        let d = noneq_density(&h, 0.0, 0.2, DEFAULT_NODE_FLOOR)?;
        worst = worst.max(d.density.zip_with(&d.equilibrium, |a, b| a - b)?.max_abs());
    }
    Ok(Check::new(worst == 0.0, format!("max |rho - |psi|^2| = {worst:.3e}")))
}

fn memory_kernel_monotone() -> Result<Check> {
    let box_grid = Grid1D::new(0.0, 1.0, 41)?;
    let times = TimeGrid::new(0.0, 0.01, 81)?;
    let mut histories = vec![
        ("box", FieldHistory::from_provider(&beat_box(), box_grid, times)?),
        ("stationary", FieldHistory::from_provider(&StationaryState::new(3, 1.0, unit())?, box_grid, times)?),
    ];
    let g = Grid1D::new(-6.0, 6.0, 61)?;
    histories.push(("gaussian", FieldHistory::from_provider(&GaussianPacket::new(1.0, 1.0, 0.0, unit())?, g, times)?));
    let cfg = RunConfig {
        provider: ProviderSpec::Numeric { sigma0: 1.0, k0: 1.0, center: 0.0, harmonic_omega: 0.5, substeps: 2 },
        ..RunConfig::default()
    };
    histories
        .push(("numeric", crate::provider::Provider::from_config(&cfg)?.history(Grid1D::new(-8.0, 8.0, 161)?, times)?));
    let mut bad = Vec::new();
    for (name, h) in &histories {
        let d = noneq_density(h, 0.1, 0.1, DEFAULT_NODE_FLOOR)?;
        let k = &d.kernel;
        let nx = k.grid.len();
        let ok = (1..k.times.len()).all(|j| (0..nx).all(|i| k.get(j, i) >= k.get(j - 1, i)))
            && k.slice(0).iter().all(|v| *v >= 0.0);
        if !ok {
            bad.push(*name);
        }
    }
    Ok(Check::new(bad.is_empty(), format!("providers box, stationary, gaussian, numeric; decreasing: {bad:?}")))
}

fn memory_solution_property() -> Result<Check> {
    let sys = beat_box();
    let errs = BOX_LEVELS
        .par_iter()
        .map(|&(nx, dt)| {
            let (h, hydro) = box_level(nx, dt)?;
            let vdot = acceleration_series(&hydro.quantum_potential, &vec![0.0; nx], &unit())?;
            let d = noneq_surface(&sys, h.grid, h.times, 0.04, 0.1, DEFAULT_NODE_FLOOR, KernelPath::along_flow())?;
            Ok(second_order_residual(&d.density, &hydro.velocity, &vdot)?.max_abs_within(BOX_WINDOW.0, BOX_WINDOW.1))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(order(&errs, 3.0, 5.0))
}

fn memory_order_c_squared() -> Result<Check> {
    let grid = Grid1D::new(0.1, 0.9, 81)?;
    let times = TimeGrid::new(0.04, 1e-3, 131)?;
    let h = FieldHistory::from_provider(&beat_box(), grid, times)?;
    let gaps = [0.2, 0.1, 0.05]
        .iter()
        .map(|&c| {
            let lin = noneq_density(&h, c, 0.04, DEFAULT_NODE_FLOOR)?;
            let ex = noneq_density_exp(&h, c, 0.04, DEFAULT_NODE_FLOOR, 200, 1e-14)?;
            Ok(lin.density.zip_with(&ex.density, |a, b| a - b)?.max_abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(order(&gaps, 3.0, 5.0))
}

fn memory_stationary_identity() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in 1..=3u32 {
        let s = StationaryState::new(n, 1.0, unit())?;
        let grid = Grid1D::new(0.1 / n as f64, 0.9 / n as f64, 33)?;
        let times = TimeGrid::new(0.0, 0.01, 61)?;
        let h = FieldHistory::from_provider(&s, grid, times)?;
        for c in [-0.2, 0.0, 0.3] {
            for tau in [0.0, 0.137] {
                let lin = noneq_density(&h, c, tau, DEFAULT_NODE_FLOOR)?;
                let ex = noneq_density_exp(&h, c, tau, DEFAULT_NODE_FLOOR, 200, 1e-14)?;
                for d in [&lin, &ex] {
                    let r = &d.density;
                    for k in 0..r.times.len() {
                        for (i, x) in grid.points().enumerate() {
                            let expect = s.density(x, 0.0) + c * (r.times.t(k) - tau);
                            worst = worst.max((r.get(k, i) - expect).abs());
                        }
                    }
                }
            }
        }
    }
    Ok(Check::new(worst < 1e-10, format!("max deviation {worst:.3e} (limit 1e-10)")))
}

fn systems_closed_form() -> Result<Check> {
    let sys = beat_box();
    let (mut worst, mut used): (f64, usize) = (0.0, 0);
    for p in lattice(400, 3) {
        let (x, t, dtau) = (0.01 + 0.98 * p[0], 0.2 + 3.0 * p[1], 1.5 * p[2]);
        let (s1, s2) = ((std::f64::consts::PI * x).sin(), (2.0 * std::f64::consts::PI * x).sin());
        if (s1 * s1 - s2 * s2).abs() <= 1e-3 || used == 200 {
            continue;
        }
        used += 1;
        let closed = box_noneq_closed(&sys, x, t, dtau, 0.1)?;
        let quad = surface_point(&sys, x, t, t - dtau, 0.1, DEFAULT_NODE_FLOOR, KernelPath::fixed_point())?.density;
        worst = worst.max((closed - quad).abs() / closed.abs().max(1e-300));
    }
    Ok(Check::new(worst < 1e-6, format!("{used} points, max relative gap {worst:.3e} (limit 1e-6)")))
}

fn systems_provider_residuals() -> Result<Check> {
    let box_errs = BOX_LEVELS
        .par_iter()
        .map(|&(nx, dt)| {
            let (_, h) = box_level(nx, dt)?;
            Ok(continuity_residual(&h.rho_eq, &h.velocity)?.max_abs_within(BOX_WINDOW.0, BOX_WINDOW.1))
        })
        .collect::<Result<Vec<f64>>>()?;
    let gauss_errs = GAUSS_LEVELS
        .par_iter()
        .map(|&(nx, dt)| {
            let h = gaussian_level(nx, dt, 1.0)?;
            Ok(continuity_residual(&h.rho_eq, &h.velocity)?.max_abs_within((-4.0, 4.0), (0.1, 0.9)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let numeric_errs = [(201usize, 0.02), (401, 0.01), (801, 0.005)]
        .par_iter()
        .map(|&(nx, dt)| {
            let cfg = RunConfig {
                provider: ProviderSpec::Numeric { sigma0: 1.0, k0: 1.0, center: 0.0, harmonic_omega: 0.0, substeps: 1 },
                ..RunConfig::default()
            };
            let grid = Grid1D::new(-10.0, 10.0, nx)?;
            let times = TimeGrid::new(0.0, dt, (1.0 / dt).round() as usize + 1)?;
            let hist = crate::provider::Provider::from_config(&cfg)?.history(grid, times)?;
            let h = decompose_history(&hist, &unit(), DEFAULT_NODE_FLOOR)?;
            Ok(continuity_residual(&h.rho_eq, &h.velocity)?.max_abs_within((-4.0, 4.0), (0.1, 0.9)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let s = StationaryState::new(2, 1.0, unit())?;
    let grid = Grid1D::new(0.05, 0.45, 81)?;
    let hs = decompose_history(
        &FieldHistory::from_provider(&s, grid, TimeGrid::new(0.0, 0.01, 21)?)?,
        &unit(),
        DEFAULT_NODE_FLOOR,
    )?;
    let stationary = continuity_residual(&hs.rho_eq, &hs.velocity)?.max_abs;
    let ok = |e: &[f64]| ratios(e).iter().all(|q| (3.0..=5.0).contains(q));
    Ok(Check::new(
        ok(&box_errs) && ok(&gauss_errs) && ok(&numeric_errs) && stationary < 1e-6,
        format!(
            "continuity ratios box {} gaussian {} numeric {}; stationary max {stationary:.3e}",
            list(&ratios(&box_errs)),
            list(&ratios(&gauss_errs)),
            list(&ratios(&numeric_errs))
        ),
    ))
}

fn systems_evolver_norm() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let cases: [(Grid1D, Box<dyn WaveFunction>); 2] = [
        (Grid1D::new(0.0, 1.0, 401)?, Box::new(beat_box())),
        (Grid1D::new(-20.0, 20.0, 801)?, Box::new(GaussianPacket::new(1.0, 1.0, -2.0, unit())?)),
    ];
    for (grid, w) in &cases {
        let psi0 = ComplexField::sample(*grid, 0.0, |x| w.psi(x, 0.0))?;
        let h = evolve_numeric(&psi0, &vec![0.0; grid.len()], 1e-3, 500, &unit())?;
        let n0 = h.field(0).norm();
        for k in 0..h.times.len() {
            worst = worst.max((h.field(k).norm() / n0 - 1.0).abs());
        }
    }
    Ok(Check::new(worst < 1e-10, format!("max relative norm drift {worst:.3e} (limit 1e-10)")))
}

fn systems_dyson_order() -> Result<Check> {
    let a = Complex64::new(0.5f64.sqrt(), 0.0);
    let h = HamiltonianSpec::box_levels(1.0, vec![1, 2], vec![a, a], &unit())?;
    let errs = [0.04, 0.02, 0.01, 0.005]
        .iter()
        .map(|&t| {
            let mut worst: f64 = 0.0;
            for x in [0.2, 0.45, 0.7] {
                let exact = h.exact_psi(x, t, &unit()).norm_sqr();
                worst = worst.max((dyson_density(&h, t, 0.0, 0.0, x, &unit())? - exact).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(order(&errs, 3.5, 4.5))
}

fn spectral_linearity() -> Result<Check> {
    let pts = lattice(48, 2);
    let t: Vec<f64> = (0..48).map(|j| 0.1 * j as f64).collect();
    let a: Vec<f64> = pts.iter().map(|p| 4.0 * p[0] - 2.0).collect();
    let b: Vec<f64> = pts.iter().map(|p| 4.0 * p[1] - 2.0).collect();
    let (alpha, beta) = (1.7, -0.6);
    let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect();
    let mut worst: f64 = 0.0;
    for w in [Window::Rectangular, Window::Hann] {
        let (sa, sb, sm) = (density_spectrum(&t, &a, w)?, density_spectrum(&t, &b, w)?, density_spectrum(&t, &mix, w)?);
        for k in 0..sm.rho_hat.len() {
            worst = worst.max((sm.rho_hat[k] - (sa.rho_hat[k] * alpha + sb.rho_hat[k] * beta)).norm());
        }
    }
    Ok(Check::new(worst < 1e-12, format!("max deviation {worst:.3e} (limit 1e-12)")))
}

fn spectral_pv_reflection() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (w0, mu, slope, half) in [(0.4, 0.7, 0.3, 3.0), (-0.8, 0.1, -0.5, 1.5), (0.0, -0.3, 1.0, 2.5)] {
        let g = move |w: f64| (-(w - mu) * (w - mu)).exp() * (1.0 + slope * w);
        let (a, b) = (w0 - half, w0 + 1.3 * half);
        let p = principal_value(g, w0, (a, b), PvOptions::default())?.value;
        let q = principal_value(|w| g(2.0 * w0 - w), w0, (2.0 * w0 - b, 2.0 * w0 - a), PvOptions::default())?.value;
        worst = worst.max((p + q).abs() / p.abs().max(1.0));
    }
    Ok(Check::new(worst < 1e-9, format!("max |P + P_reflected| {worst:.3e} (limit 1e-9)")))
}

fn spectral_survival() -> Result<Check> {
    let times: Vec<f64> = (0..601).map(|j| 0.01 * j as f64).collect();
    let run = |omega_max: f64, window: (f64, f64)| -> Result<_> {
        let w = SampledWeight::sample(
            |w| Complex64::new(lorentzian(w, 50.0, 1.0), 0.0),
            omega_max,
            (omega_max * 100.0) as usize,
        )?;
        let s = survival_probability(&w, &times, SurvivalOptions::default())?;
        Ok(decay_fit(&s, window, NON_EXPONENTIAL_THRESHOLD)?)
    };
    let full = run(100.0, (0.5, 3.0))?;
    let cut = run(55.0, (3.0, 6.0))?;
    let rate_ok = (full.gamma / 2.0 - 1.0).abs() < 0.02;
    Ok(Check::new(
        rate_ok && full.deviation < 0.02 && cut.deviation > 0.05 && cut.non_exponential,
        format!(
            "full support: rate {:.5} (2γ = 2), deviation {:.3e}; truncated: deviation {:.3e}",
            full.gamma, full.deviation, cut.deviation
        ),
    ))
}

fn spectral_sokhotski_plemelj() -> Result<Check> {
    let g = |w: f64| Complex64::new((-w * w / 2.0).exp(), 0.0);
    let mut exact = true;
    let mut reals = Vec::new();
    for sign in [PoleSign::Retarded, PoleSign::Advanced] {
        for eps in [0.5, 0.1, 0.01] {
            let m = PoleModel {
                g,
                omega0: 0.3,
                domain: (-6.0, 6.0),
                sign,
                options: PvOptions { epsilon: eps, ..PvOptions::default() },
            };
            let z = sokhotski_plemelj(&m)?;
            exact &= z.im == sign.factor() * std::f64::consts::PI * g(0.3).re;
            reals.push(z.re);
        }
    }
    let spread = reals.iter().fold(0.0_f64, |m, r| m.max((r - reals[0]).abs()));
    Ok(Check::new(
        exact && spread < 1e-9,
        format!("imaginary part exact: {exact}; real-part spread over radii {spread:.3e}"),
    ))
}

fn chsh_zero_window() -> Result<Check> {
    let sys = beat_box();
    let opts = ChshOptions::default();
    let mut exact = true;
    for p in lattice(100, 3) {
        let (x, t, c) = (0.01 + 0.98 * p[0], 3.0 * p[1], 2.0 * p[2] - 1.0);
        exact &= windowed_density(&sys, x, t, 0.0, c, &opts)? == sys.density(x, t);
    }
    Ok(Check::new(exact, format!("100 points, all exact: {exact}")))
}

fn chsh_stationary_lhs() -> Result<Check> {
    let s = StationaryState::new(1, 1.0, unit())?;
    let opts = ChshOptions::default();
    let mut worst: f64 = 0.0;
    let mut positive = true;
    for p in lattice(50, 3) {
        let conv = ChshConvention { tag: ConventionTag::C1, x0: 0.05 + 0.9 * p[0], t_ref: 0.0 };
        let dtau = 0.05 + 0.45 * p[1];
        let c = 0.3 * p[2] + 0.01;
        let params = ChshParams { t: 1.0, t_prime: 0.4, delta_tau: dtau, delta_tau_prime: dtau + 0.2, c };
        let r = chsh_lhs(&s, &conv, params, &opts)?;
        worst = worst.max((r.lhs - 2.0 * c * dtau).abs());
        positive &= r.violated;
    }
    let conv = ChshConvention { tag: ConventionTag::C1, x0: 0.5, t_ref: 0.0 };
    let trace = delta_tau_limit_trace(&s, &conv, 1.0, 0.5, 0.8, 0.1, &[0.4, 0.2, 0.1, 0.05, 0.01], &opts)?;
    let linear = trace.delta_tau.iter().zip(&trace.lhs).all(|(d, l)| (l - 0.2 * d).abs() < 1e-10);
    Ok(Check::new(
        worst < 1e-10 && positive && linear && trace.endpoint() == 0.0,
        format!("max |lhs - 2c dtau| {worst:.3e}; all violate: {positive}; limit linear to 0: {linear}"),
    ))
}

fn demo_ranges() -> ScanRanges {
    ScanRanges {
        t: vec![0.3, 0.6, 0.9, 1.2],
        t_prime: vec![0.1, 0.5],
        delta_tau: vec![0.0, 0.1, 0.2],
        delta_tau_prime: vec![0.3],
        c: vec![-0.1, 0.1],
    }
}

fn chsh_scan_invariance() -> Result<Check> {
    let sys = beat_box();
    let conv = ChshConvention { tag: ConventionTag::C1, x0: 0.3, t_ref: 0.0 };
    let opts = ChshOptions::default();
    let ranges = demo_ranges();
    let mut results = Vec::new();
    for n in [1, 3, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| crate::error::CliError::Config(e.to_string()))?;
        results.push(pool.install(|| scan_parallel(&sys, &conv, &ranges, &opts))?);
    }
    let mut chunked = Vec::new();
    for t in &ranges.t {
        let part = ScanRanges { t: vec![*t], ..ranges.clone() };
        for p in scan_points(&part)? {
            chunked.push(chsh_lhs(&sys, &conv, p, &opts)?);
        }
    }
    let merged = ScanResult::from_records(chunked)?;
    let same = results.iter().all(|r| *r == results[0]) && merged == results[0];
    Ok(Check::new(same, format!("threads 1, 3, 8 and per-t chunks identical: {same}")))
}

fn chsh_record_reproducible() -> Result<Check> {
    let sys = beat_box();
    let opts = ChshOptions::default();
    let mut same = true;
    let mut n = 0;
    for tag in [ConventionTag::C1, ConventionTag::C2] {
        let conv = ChshConvention { tag, x0: 0.3, t_ref: 1.0 };
        for r in scan_parallel(&sys, &conv, &demo_ranges(), &opts)?.records {
            let again = chsh_lhs(&sys, &r.convention, r.params, &opts)?;
            same &= again.lhs.to_bits() == r.lhs.to_bits() && again.violated == r.violated;
            n += 1;
        }
    }
    Ok(Check::new(same, format!("{n} records recomputed bit-identically: {same}")))
}

fn small_config() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.grid.n_points = 41;
    cfg.time.steps = 40;
    cfg.time.dt = 0.01;
    cfg.chsh.t = Axis::Values(vec![0.5, 1.0]);
    cfg.chsh.delta_tau = Axis::Values(vec![0.1, 0.2]);
    cfg.chsh.c = Some(Axis::Values(vec![-0.1, 0.1]));
    cfg
}

fn data_files(m: &RunManifest) -> Vec<(String, String)> {
    m.outputs.iter().map(|r| (r.path.clone(), r.sha256.clone())).collect()
}

fn cli_deterministic_outputs() -> Result<Check> {
    let cfg = small_config();
    let mut mismatched = Vec::new();
    for command in [Command::Density, Command::ChshScan, Command::Box] {
        let a = tempfile::tempdir().map_err(|e| crate::error::CliError::io(std::env::temp_dir(), e))?;
        let b = tempfile::tempdir().map_err(|e| crate::error::CliError::io(std::env::temp_dir(), e))?;
        let ma = commands::run(command, &cfg, a.path(), Some(1), false)?.manifest;
        let mb = commands::run(command, &cfg, b.path(), Some(4), false)?.manifest;
        if data_files(&ma) != data_files(&mb) {
            mismatched.push(command.name());
        }
    }
    Ok(Check::new(
        mismatched.is_empty(),
        format!("density, chsh-scan, box at 1 and 4 threads; differing: {mismatched:?}"),
    ))
}

fn cli_manifest_reproduces() -> Result<Check> {
    let tmp = |_: ()| tempfile::tempdir().map_err(|e| crate::error::CliError::io(std::env::temp_dir(), e));
    let (a, b) = (tmp(())?, tmp(())?);
    let first = commands::run(Command::Density, &small_config(), a.path(), None, false)?.manifest;
    let loaded = RunManifest::load(&a.path().join(crate::output::MANIFEST_FILE))?;
    let second = commands::run(Command::Density, &loaded.config, b.path(), None, false)?.manifest;
    let same =
        data_files(&first) == data_files(&second) && first.outputs.iter().any(|r| r.path == crate::output::CONFIG_FILE);
    Ok(Check::new(same, format!("{} files reproduced from the manifest: {same}", first.outputs.len())))
}
