// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Madelung decomposition and residuals of the hydrodynamic identities.
//!
//! With `Ψ = √ρ·e^{iS/ħ}` and `v = ∂S/∂x / m` the Schrödinger equation splits
//! into the continuity equation `dρ/dt = −ρ ∂v/∂x`, the Hamilton–Jacobi
//! equation `∂S/∂t + (∂S/∂x)²/2m + V + Q = 0` with the quantum potential
//! `Q = −(ħ²/2m)·∂²√ρ/√ρ`, and the equation of motion `m dv/dt = −∂(Q+V)/∂x`.
//! Differentiating the continuity equation once more along the flow gives the
//! second-order density equation `ρ̈ + ρ̇ ∂v/∂x + ρ ∂v̇/∂x = 0`.
//!
//! All convective derivatives are evaluated in Eulerian form, `∂t + v ∂x`,
//! with the stencils of [`crate::stencil`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::field::{ComplexField, FieldHistory, RealSeries};
use crate::grid::{Grid1D, PhysicalParams};
use crate::math::{exp, log, sq, sqrt, wrap_angle};
use crate::stencil::{convective, fill_from_nearest, gradient, laplacian, max_abs, series_dt, series_dx};
use crate::{Error, Result};

/// Hydrodynamic fields derived from one wavefunction sample.
#[derive(Debug, Clone, PartialEq)]
pub struct HydroSlice {
    pub grid: Grid1D,
    pub time: f64,
    /// `|ψ|²`.
    pub rho_eq: Vec<f64>,
    /// Phase `S` in action units, continuous in `x`.
    pub phase: Vec<f64>,
    pub velocity: Vec<f64>,
    pub div_v: Vec<f64>,
    pub quantum_potential: Vec<f64>,
    /// True where `rho_eq < node_floor`; fields there are copied from the
    /// nearest valid neighbour.
    pub node_mask: Vec<bool>,
}

impl HydroSlice {
    /// `√ρ·e^{iS/ħ}` at every grid point.
    pub fn reconstruct(&self, params: &PhysicalParams) -> Vec<Complex64> {
        self.rho_eq.iter().zip(&self.phase).map(|(&r, &s)| Complex64::from_polar(sqrt(r), s / params.hbar)).collect()
    }
}

/// A derived field with the points where it is not defined.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedField {
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

fn check_node_floor(node_floor: f64) -> Result<()> {
    if node_floor.is_finite() && node_floor > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("node_floor", "must be finite and > 0"))
    }
}

fn check_density(grid: &Grid1D, rho: &[f64]) -> Result<()> {
    if rho.len() != grid.len() {
        return Err(Error::Shape(format!("{} densities for a grid of {} points", rho.len(), grid.len())));
    }
    if let Some((index, &value)) = rho.iter().enumerate().find(|(_, r)| !(**r >= 0.0)) {
        return Err(Error::NegativeDensity { index, value });
    }
    Ok(())
}

/// Polar decomposition of a sampled wavefunction.
///
/// The raw phase is unwrapped left to right over non-node points, starting at
/// the leftmost one, whose phase stays in `(−π, π]`.
pub fn madelung_decompose(psi: &ComplexField, params: &PhysicalParams, node_floor: f64) -> Result<HydroSlice> {
    params.validate()?;
    check_node_floor(node_floor)?;
    let grid = psi.grid;
    let rho_eq = psi.density();
    let node_mask: Vec<bool> = rho_eq.iter().map(|&r| r < node_floor).collect();
    let first = node_mask.iter().position(|&m| !m).ok_or(Error::EmptyField { node_floor })?;

    let mut phase = vec![0.0; grid.len()];
    let mut prev = psi.values()[first].arg();
    phase[first] = prev;
    let mut unwrapped = prev;
    for i in first + 1..grid.len() {
        if node_mask[i] {
            continue;
        }
        let raw = psi.values()[i].arg();
        unwrapped += wrap_angle(raw - prev);
        prev = raw;
        phase[i] = unwrapped;
    }
    fill_from_nearest(&mut phase, &node_mask);
    for s in phase.iter_mut() {
        *s *= params.hbar;
    }

    let h = grid.spacing();
    let mut velocity: Vec<f64> = gradient(&phase, h).into_iter().map(|g| g / params.mass).collect();
    fill_from_nearest(&mut velocity, &node_mask);
    let mut div_v = gradient(&velocity, h);
    fill_from_nearest(&mut div_v, &node_mask);
    let q = quantum_potential(&grid, &rho_eq, params, node_floor)?;

    Ok(HydroSlice { grid, time: psi.time, rho_eq, phase, velocity, div_v, quantum_potential: q.values, node_mask })
}

/// `Q = −(ħ²/2m)·∂²√ρ/√ρ`. Points with `ρ < node_floor` are masked and carry
/// the value of their nearest valid neighbour.
pub fn quantum_potential(grid: &Grid1D, rho: &[f64], params: &PhysicalParams, node_floor: f64) -> Result<MaskedField> {
    check_node_floor(node_floor)?;
    check_density(grid, rho)?;
    let amp: Vec<f64> = rho.iter().map(|&r| sqrt(r)).collect();
    let lap = laplacian(&amp, grid.spacing());
    let pre = -sq(params.hbar) / (2.0 * params.mass);
    let mask: Vec<bool> = rho.iter().map(|&r| r < node_floor).collect();
    let mut values: Vec<f64> =
        lap.iter().zip(&amp).zip(&mask).map(|((&l, &a), &m)| if m { 0.0 } else { pre * l / a }).collect();
    fill_from_nearest(&mut values, &mask);
    Ok(MaskedField { values, mask })
}

/// `Q = −(ħ²/4m)·[∂²ρ/ρ − ½(∂ ln ρ)²]`, the logarithmic form of the quantum
/// potential. A point is masked when any density its stencils touch lies
/// below `node_floor`.
pub fn quantum_potential_alt(
    grid: &Grid1D,
    rho: &[f64],
    params: &PhysicalParams,
    node_floor: f64,
) -> Result<MaskedField> {
    check_node_floor(node_floor)?;
    check_density(grid, rho)?;
    let n = rho.len();
    let low: Vec<bool> = rho.iter().map(|&r| r < node_floor).collect();
    let mask: Vec<bool> = (0..n)
        .map(|i| {
            let (lo, hi) = match i {
                0 => (0, 4),
                i if i + 1 == n => (n - 5, n - 1),
                i => (i - 1, i + 1),
            };
            low[lo..=hi].iter().any(|&m| m)
        })
        .collect();
    let safe: Vec<f64> = rho.iter().map(|&r| r.max(node_floor)).collect();
    let h = grid.spacing();
    let lap = laplacian(&safe, h);
    let ln: Vec<f64> = safe.iter().map(|&r| log(r)).collect();
    let dln = gradient(&ln, h);
    let pre = -sq(params.hbar) / (4.0 * params.mass);
    let mut values: Vec<f64> =
        (0..n).map(|i| if mask[i] { 0.0 } else { pre * (lap[i] / safe[i] - 0.5 * sq(dln[i])) }).collect();
    fill_from_nearest(&mut values, &mask);
    Ok(MaskedField { values, mask })
}

/// Hydrodynamic fields for every slice of a wavefunction history.
#[derive(Debug, Clone, PartialEq)]
pub struct HydroSeries {
    pub rho_eq: RealSeries,
    pub phase: RealSeries,
    pub velocity: RealSeries,
    pub div_v: RealSeries,
    pub quantum_potential: RealSeries,
    /// Node mask per (time, point), row-major by time.
    pub node_mask: Vec<bool>,
}

impl HydroSeries {
    /// Stacks already decomposed slices (in time order).
    pub fn from_slices(history: &FieldHistory, slices: &[HydroSlice]) -> Result<Self> {
        let grid = history.grid;
        let times = history.times;
        let pick = |f: fn(&HydroSlice) -> &Vec<f64>| -> Result<RealSeries> {
            let v: Vec<Vec<f64>> = slices.iter().map(|s| f(s).clone()).collect();
            RealSeries::from_slices(grid, times, &v)
        };
        Ok(HydroSeries {
            rho_eq: pick(|s| &s.rho_eq)?,
            phase: pick(|s| &s.phase)?,
            velocity: pick(|s| &s.velocity)?,
            div_v: pick(|s| &s.div_v)?,
            quantum_potential: pick(|s| &s.quantum_potential)?,
            node_mask: slices.iter().flat_map(|s| s.node_mask.iter().copied()).collect(),
        })
    }
}

/// Decomposes every slice of `history` (sequentially).
pub fn decompose_history(history: &FieldHistory, params: &PhysicalParams, node_floor: f64) -> Result<HydroSeries> {
    let slices = (0..history.times.len())
        .map(|k| madelung_decompose(&history.field(k), params, node_floor))
        .collect::<Result<Vec<_>>>()?;
    HydroSeries::from_slices(history, &slices)
}

/// A residual field with its maximum absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub field: RealSeries,
    pub max_abs: f64,
}

impl Residual {
    fn new(field: RealSeries) -> Self {
        let max_abs = max_abs(field.values());
        Residual { field, max_abs }
    }

    /// Maximum over a physical sub-window, used to keep boundary stencils out
    /// of convergence measurements.
    pub fn max_abs_within(&self, x: (f64, f64), t: (f64, f64)) -> f64 {
        self.field.max_abs_within(x.0, x.1, t.0, t.1)
    }
}

/// `r = ∂ρ/∂t + v ∂ρ/∂x + ρ ∂v/∂x`.
pub fn continuity_residual(rho: &RealSeries, v: &RealSeries) -> Result<Residual> {
    rho.check_aligned(v)?;
    let rho_dot = convective(rho, v)?;
    let div_v = series_dx(v);
    let r = rho_dot.zip_with(&rho.zip_with(&div_v, |a, b| a * b)?, |a, b| a + b)?;
    Ok(Residual::new(r))
}

/// Removes 2πħ jumps between consecutive time samples at every point.
fn unwrap_in_time(s: &RealSeries, hbar: f64) -> RealSeries {
    let nx = s.grid.len();
    let mut out = s.values().to_vec();
    for k in 1..s.times.len() {
        for i in 0..nx {
            let prev = out[(k - 1) * nx + i];
            let cur = s.get(k, i);
            out[k * nx + i] = prev + hbar * wrap_angle((cur - prev) / hbar);
        }
    }
    RealSeries::new(s.grid, s.times, out).expect("shape preserved")
}

/// `r = ∂S/∂t + (∂S/∂x)²/2m + V + Q` with `∂S/∂x = m·v`.
///
/// The phase is made continuous in time before differencing, so slices pinned
/// independently to `(−πħ, πħ]` are accepted.
pub fn hamilton_jacobi_residual(
    phase: &RealSeries,
    v: &RealSeries,
    q: &RealSeries,
    potential: &[f64],
    params: &PhysicalParams,
) -> Result<Residual> {
    phase.check_aligned(v)?;
    phase.check_aligned(q)?;
    if potential.len() != phase.grid.len() {
        return Err(Error::Shape(format!("potential has {} values for {} points", potential.len(), phase.grid.len())));
    }
    let s_t = series_dt(&unwrap_in_time(phase, params.hbar))?;
    let nx = phase.grid.len();
    let vals = (0..s_t.values().len())
        .map(|j| {
            let i = j % nx;
            s_t.values()[j] + 0.5 * params.mass * sq(v.values()[j]) + potential[i] + q.values()[j]
        })
        .collect();
    Ok(Residual::new(RealSeries::new(phase.grid, phase.times, vals)?))
}

/// `dv/dt = −∂(Q + V)/∂x / m` on one slice.
pub fn acceleration_field(grid: &Grid1D, q: &[f64], potential: &[f64], params: &PhysicalParams) -> Result<Vec<f64>> {
    if q.len() != grid.len() || potential.len() != grid.len() {
        return Err(Error::Shape(format!(
            "Q has {} and V has {} values for {} points",
            q.len(),
            potential.len(),
            grid.len()
        )));
    }
    let total: Vec<f64> = q.iter().zip(potential).map(|(a, b)| a + b).collect();
    Ok(gradient(&total, grid.spacing()).into_iter().map(|g| -g / params.mass).collect())
}

/// [`acceleration_field`] applied to every slice of `q`.
pub fn acceleration_series(q: &RealSeries, potential: &[f64], params: &PhysicalParams) -> Result<RealSeries> {
    let slices = (0..q.times.len())
        .map(|k| acceleration_field(&q.grid, q.slice(k), potential, params))
        .collect::<Result<Vec<_>>>()?;
    RealSeries::from_slices(q.grid, q.times, &slices)
}

/// `r = ρ̈ + ρ̇ ∂v/∂x + ρ·d(∂v/∂x)/dt`, every dot being `∂t + v ∂x`.
///
/// `vdot` is the acceleration `dv/dt`; the last term uses
/// `d(∂v/∂x)/dt = ∂v̇/∂x − (∂v/∂x)²`, so any `(ρ, v)` obeying continuity has
/// zero residual.
pub fn second_order_residual(rho: &RealSeries, v: &RealSeries, vdot: &RealSeries) -> Result<Residual> {
    rho.check_aligned(v)?;
    rho.check_aligned(vdot)?;
    if rho.times.len() < 5 {
        return Err(Error::Precondition("second-order residual needs at least 5 time slices".into()));
    }
    let rho_dot = convective(rho, v)?;
    let rho_ddot = convective(&rho_dot, v)?;
    let div_v = series_dx(v);
    let div_vdot = series_dx(vdot);
    let vals = (0..rho.values().len())
        .map(|j| {
            let d = div_v.values()[j];
            rho_ddot.values()[j] + rho_dot.values()[j] * d + rho.values()[j] * (div_vdot.values()[j] - d * d)
        })
        .collect();
    Ok(Residual::new(RealSeries::new(rho.grid, rho.times, vals)?))
}

/// A Bohmian trajectory sampled at the velocity series' time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub x0: f64,
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    /// True when integration stopped because the path left the grid.
    pub exited: bool,
}

fn velocity_at(v: &RealSeries, k: usize, frac: f64, x: f64) -> Option<f64> {
    let a = v.grid.interpolate(v.slice(k), x)?;
    if frac == 0.0 {
        return Some(a);
    }
    let b = v.grid.interpolate(v.slice(k + 1), x)?;
    Some(a + frac * (b - a))
}

/// Classical RK4 integration of `dx/dt = v(x, t)` from the first time of `v`.
///
/// `v` is interpolated linearly in `x` and in `t`. The path is truncated (and
/// flagged) at the first step whose stages leave the grid.
pub fn integrate_trajectory(x0: f64, v: &RealSeries, n_steps: usize) -> Result<Trajectory> {
    if !v.grid.contains(x0) {
        return Err(Error::OutOfDomain { x: x0, lo: v.grid.x_min(), hi: v.grid.x_max() });
    }
    if n_steps + 1 > v.times.len() {
        return Err(Error::Precondition(format!(
            "{n_steps} steps need {} velocity slices, got {}",
            n_steps + 1,
            v.times.len()
        )));
    }
    let dt = v.times.dt();
    let mut times = vec![v.times.t0()];
    let mut positions = vec![x0];
    let mut x = x0;
    let mut exited = false;
    for k in 0..n_steps {
        let stage = || -> Option<f64> {
            let k1 = velocity_at(v, k, 0.0, x)?;
            let k2 = velocity_at(v, k, 0.5, x + 0.5 * dt * k1)?;
            let k3 = velocity_at(v, k, 0.5, x + 0.5 * dt * k2)?;
            let k4 = velocity_at(v, k + 1, 0.0, x + dt * k3)?;
            let next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            v.grid.contains(next).then_some(next)
        };
        match stage() {
            Some(next) => {
                x = next;
                times.push(v.times.t(k + 1));
                positions.push(x);
            }
            None => {
                exited = true;
                break;
            }
        }
    }
    Ok(Trajectory { x0, times, positions, exited })
}

/// Outcome of [`exponential_solution_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialCheck {
    /// `max_t |ρ(x(t),t) − ρ(x0,τ)·exp(−∫ ∂v/∂x dt')|` over unmasked steps.
    pub discrepancy: f64,
    pub masked_steps: usize,
    pub node_encountered: bool,
}

/// Compares the density carried along `trajectory` with the exponential
/// solution of the continuity equation.
pub fn exponential_solution_check(
    rho: &RealSeries,
    v: &RealSeries,
    trajectory: &Trajectory,
    node_floor: f64,
) -> Result<ExponentialCheck> {
    rho.check_aligned(v)?;
    check_node_floor(node_floor)?;
    let start = trajectory.times.first().copied().ok_or_else(|| Error::Precondition("empty trajectory".into()))?;
    let k0 = rho
        .times
        .index_of(start)
        .ok_or_else(|| Error::Precondition(format!("trajectory start t = {start} is not a series sample")))?;
    if k0 + trajectory.positions.len() > rho.times.len() {
        return Err(Error::Precondition("trajectory extends past the density series".into()));
    }
    let div_v = series_dx(v);
    let dt = rho.times.dt();
    let sample = |s: &RealSeries, j: usize| -> Result<f64> {
        let x = trajectory.positions[j];
        s.grid.interpolate(s.slice(k0 + j), x).ok_or(Error::OutOfDomain { x, lo: s.grid.x_min(), hi: s.grid.x_max() })
    };
    let rho0 = sample(rho, 0)?;
    let mut integral = 0.0;
    let mut prev_div = sample(&div_v, 0)?;
    let mut out = ExponentialCheck { discrepancy: 0.0, masked_steps: 0, node_encountered: rho0 < node_floor };
    for j in 1..trajectory.positions.len() {
        let d = sample(&div_v, j)?;
        integral += 0.5 * dt * (prev_div + d);
        prev_div = d;
        let actual = sample(rho, j)?;
        if actual < node_floor || rho0 < node_floor {
            out.node_encountered = true;
            out.masked_steps += 1;
            continue;
        }
        let predicted = rho0 * exp(-integral);
        out.discrepancy = out.discrepancy.max((actual - predicted).abs());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{sin, PI};
    use crate::TimeGrid;

    fn plane_wave(k: f64, omega: f64, grid: Grid1D, times: TimeGrid) -> FieldHistory {
        FieldHistory::from_fn(grid, times, |x, t| Complex64::from_polar(1.0, k * x - omega * t)).unwrap()
    }

    #[test]
    fn plane_wave_decomposition() {
        let grid = Grid1D::new(-3.0, 3.0, 61).unwrap();
        let psi = ComplexField::sample(grid, 0.0, |x| Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        let s = madelung_decompose(&psi, &PhysicalParams::default(), 1e-12).unwrap();
        for i in 0..grid.len() {
            assert!((s.rho_eq[i] - 1.0).abs() < 1e-14);
            assert!((s.velocity[i] - 2.0).abs() < 1e-10);
            assert!(s.div_v[i].abs() < 1e-8);
            assert!(s.quantum_potential[i].abs() < 1e-8);
        }
        assert!(s.phase[0] > -PI && s.phase[0] <= PI);
    }

    #[test]
    fn real_gaussian_has_no_flow() {
        let grid = Grid1D::new(-5.0, 5.0, 101).unwrap();
        let psi = ComplexField::sample(grid, 0.0, |x| Complex64::new(exp(-x * x / 4.0), 0.0)).unwrap();
        let s = madelung_decompose(&psi, &PhysicalParams::default(), 1e-12).unwrap();
        assert!(s.phase.iter().all(|&p| p == 0.0));
        assert!(s.velocity.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn all_nodes_is_empty_field() {
        let grid = Grid1D::new(0.0, 1.0, 16).unwrap();
        let psi = ComplexField::sample(grid, 0.0, |_| Complex64::new(1e-8, 0.0)).unwrap();
        let err = madelung_decompose(&psi, &PhysicalParams::default(), 1e-12).unwrap_err();
        assert!(matches!(err, Error::EmptyField { .. }));
    }

    #[test]
    fn node_points_are_masked_and_filled() {
        let grid = Grid1D::new(0.0, 1.0, 21).unwrap();
        let psi = ComplexField::sample(grid, 0.0, |x| Complex64::from_polar(sin(PI * x), 3.0 * x)).unwrap();
        let s = madelung_decompose(&psi, &PhysicalParams::default(), 1e-12).unwrap();
        assert!(s.node_mask[0]);
        assert_eq!(s.velocity[0], s.velocity[1]);
        assert!(!s.node_mask[10]);
        assert!((s.velocity[10] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn constant_density_has_zero_potential() {
        let grid = Grid1D::new(0.0, 2.0, 32).unwrap();
        let rho = vec![0.7; 32];
        let p = PhysicalParams::default();
        assert!(max_abs(&quantum_potential(&grid, &rho, &p, 1e-12).unwrap().values) < 1e-12);
        assert!(max_abs(&quantum_potential_alt(&grid, &rho, &p, 1e-12).unwrap().values) < 1e-12);
    }

    #[test]
    fn negative_density_rejected() {
        let grid = Grid1D::new(0.0, 1.0, 8).unwrap();
        let mut rho = vec![1.0; 8];
        rho[3] = -1e-3;
        let err = quantum_potential(&grid, &rho, &PhysicalParams::default(), 1e-12).unwrap_err();
        assert_eq!(err, Error::NegativeDensity { index: 3, value: -1e-3 });
    }

    #[test]
    fn plane_wave_residuals_vanish() {
        let grid = Grid1D::new(0.0, 4.0, 41).unwrap();
        let times = TimeGrid::new(0.0, 0.01, 9).unwrap();
        let (k, omega) = (1.5, 0.5 * 1.5 * 1.5);
        let p = PhysicalParams::default();
        let h = decompose_history(&plane_wave(k, omega, grid, times), &p, 1e-12).unwrap();
        let c = continuity_residual(&h.rho_eq, &h.velocity).unwrap();
        assert!(c.max_abs < 1e-12, "{}", c.max_abs);
        let hj = hamilton_jacobi_residual(&h.phase, &h.velocity, &h.quantum_potential, &vec![0.0; 41], &p).unwrap();
        assert!(hj.max_abs < 1e-8, "{}", hj.max_abs);
        let vdot = acceleration_series(&h.quantum_potential, &vec![0.0; 41], &p).unwrap();
        let r2 = second_order_residual(&h.rho_eq, &h.velocity, &vdot).unwrap();
        assert!(r2.max_abs < 1e-8);
    }

    #[test]
    fn harmonic_acceleration() {
        let grid = Grid1D::new(-2.0, 2.0, 41).unwrap();
        let v: Vec<f64> = grid.points().map(|x| 0.5 * x * x).collect();
        let q = vec![0.0; 41];
        let p = PhysicalParams::new(1.0, 2.0).unwrap();
        let a = acceleration_field(&grid, &q, &v, &p).unwrap();
        for (x, ai) in grid.points().zip(&a) {
            assert!((ai + x / 2.0).abs() < 1e-12);
        }
        let flat = vec![3.0; 41];
        assert!(max_abs(&acceleration_field(&grid, &flat, &q, &p).unwrap()) < 1e-12);
    }

    #[test]
    fn uniform_flow_trajectory() {
        let grid = Grid1D::new(0.0, 10.0, 11).unwrap();
        let times = TimeGrid::new(0.0, 0.1, 21).unwrap();
        let v = RealSeries::from_fn(grid, times, |_, _| 0.75);
        let tr = integrate_trajectory(1.0, &v, 20).unwrap();
        assert!(!tr.exited);
        for (t, x) in tr.times.iter().zip(&tr.positions) {
            assert!((x - (1.0 + 0.75 * t)).abs() < 1e-12);
        }
        let tr = integrate_trajectory(9.5, &v, 20).unwrap();
        assert!(tr.exited);
        assert!(*tr.positions.last().unwrap() <= 10.0);
    }

    #[test]
    fn stationary_exponential_check() {
        let grid = Grid1D::new(0.0, 1.0, 33).unwrap();
        let times = TimeGrid::new(0.0, 0.01, 11).unwrap();
        let rho = RealSeries::from_fn(grid, times, |x, _| 2.0 * sin(PI * x) * sin(PI * x));
        let v = RealSeries::from_fn(grid, times, |_, _| 0.0);
        let tr = integrate_trajectory(0.3, &v, 10).unwrap();
        let chk = exponential_solution_check(&rho, &v, &tr, 1e-12).unwrap();
        assert_eq!(chk.discrepancy, 0.0);
    }
}
