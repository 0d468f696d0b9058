// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Memory-kernel densities.
//!
//! Reducing the second-order density equation with the equilibrium solution
//! `|Ψ|²` gives
//!
//! ```text
//! ρ(x,t) = |Ψ(x,t)|²·(1 + c·K(x,t)),   K(x,t) = ∫_τ^t dt' / |Ψ(x,t')|²
//! c      = (dρ/dt + |Ψ|² ∂v/∂x) at t = 0
//! ```
//!
//! and the self-consistent form `ρ = |Ψ|²·exp(c∫_τ^t dt'/ρ(t'))`. At fixed
//! `x` both solve `∂ρ/∂t = ρ·∂(ln|Ψ|²)/∂t + c` with `ρ(τ) = |Ψ(τ)|²`, so they
//! are the same function; numerically they differ by quadrature error only.
//!
//! Histories are integrated on their own time samples: the linear form with
//! the composite trapezoid rule, the exponential form with the exact integral
//! of `1/ρ` for piecewise-linear `ρ` (which reproduces the stationary solution
//! `ρ = |ψ_n|² + c(t − τ)` exactly). Integrands are clamped at `1/node_floor`
//! and every clamped sample is flagged.
//!
//! Continuous providers ([`WaveFunction`]) can be integrated either at a fixed
//! point ([`KernelPath::FixedPoint`], adaptive Simpson) or along the Bohmian
//! flow line through `(x, t)` ([`KernelPath::AlongFlow`]). The flow-line kernel
//! is the one for which `ρ` solves the second-order density equation with
//! convective time derivatives; the fixed-point kernel is what the closed-form
//! box density evaluates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::field::{FieldHistory, RealSeries, WaveFunction};
use crate::grid::{Grid1D, TimeGrid};
use crate::math::{exp, floor, log1p};
use crate::quad::{adaptive_simpson, QuadOptions};
use crate::{Error, Result};

/// `c = dρ/dt + ρ_eq·∂v/∂x`, all evaluated at `t = 0` at one point.
/// `dρ/dt` is the convective derivative, so equilibrium data give `c = 0`.
pub fn compute_c(rho0: f64, drho0_dt: f64, rho_eq0: f64, div_v0: f64) -> Result<f64> {
    let _ = rho0;
    if !(rho0.is_finite() && drho0_dt.is_finite() && rho_eq0.is_finite() && div_v0.is_finite()) {
        return Err(Error::invalid("c", "initial data must be finite"));
    }
    Ok(drho0_dt + rho_eq0 * div_v0)
}

fn check_floor(node_floor: f64) -> Result<()> {
    if node_floor.is_finite() && node_floor > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("node_floor", "must be finite and > 0"))
    }
}

/// Position of `τ` relative to the stored samples.
#[derive(Debug, Clone, Copy)]
struct Window {
    /// First sample with `t_k ≥ τ`.
    k0: usize,
    /// `t_{k0} − τ ∈ [0, dt)`.
    lead: f64,
}

impl Window {
    fn locate(times: &TimeGrid, tau: f64, t_end: f64) -> Result<Window> {
        let eps = 1e-9 * times.dt();
        if !(tau.is_finite() && t_end.is_finite()) {
            return Err(Error::invalid("tau", "window limits must be finite"));
        }
        if tau > t_end + eps {
            return Err(Error::Precondition(format!("need tau ≤ t, got tau = {tau}, t = {t_end}")));
        }
        if tau < times.t0() - eps || t_end > times.end() + eps {
            return Err(Error::Coverage { tau, t: t_end, start: times.t0(), end: times.end() });
        }
        let u = (tau - times.t0()) / times.dt();
        let mut k0 = floor(u + 1e-9).max(0.0) as usize;
        if times.t(k0) < tau - eps {
            k0 += 1;
        }
        k0 = k0.min(times.len() - 1);
        let lead = (times.t(k0) - tau).max(0.0);
        Ok(Window { k0, lead: if lead <= eps { 0.0 } else { lead } })
    }
}

/// Kernel values at a single time.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSlice {
    pub values: Vec<f64>,
    /// True where some integrand sample in `[τ, t]` was clamped.
    pub regularized: Vec<bool>,
}

/// Clamped integrand `1/max(|ψ|², floor)` and its clamp flag at sample `k`.
fn integrand(history: &FieldHistory, k: usize, i: usize, node_floor: f64) -> (f64, bool) {
    let r = history.slice(k)[i].norm_sqr();
    if r < node_floor {
        (1.0 / node_floor, true)
    } else {
        (1.0 / r, false)
    }
}

/// Trapezoid-rule `K(x, t) = ∫_τ^t dt'/max(|Ψ(x,t')|², node_floor)` on the
/// stored samples; partial end intervals integrate the linear interpolant.
pub fn memory_kernel(history: &FieldHistory, tau: f64, t: f64, node_floor: f64) -> Result<KernelSlice> {
    check_floor(node_floor)?;
    let times = history.times;
    let w = Window::locate(&times, tau, t)?;
    let nx = history.grid.len();
    let dt = times.dt();
    let mut values = vec![0.0; nx];
    let mut regularized = vec![false; nx];
    if t - tau <= 1e-9 * dt {
        return Ok(KernelSlice { values, regularized });
    }
    // last sample not after t
    let u = (t - times.t0()) / dt;
    let k1 = (floor(u + 1e-9) as usize).min(times.len() - 1);
    let tail = (t - times.t(k1)).max(0.0);
    for i in 0..nx {
        let f = |k: usize| integrand(history, k, i, node_floor);
        let mut acc = 0.0;
        let mut reg = false;
        if k1 < w.k0 {
            // τ and t share one interval
            let (fa, ra) = f(k1);
            let (fb, rb) = f(k1 + 1);
            let at = |s: f64| fa + (fb - fa) * (s - times.t(k1)) / dt;
            acc = 0.5 * (t - tau) * (at(tau) + at(t));
            reg = ra || rb;
        } else {
            if w.lead > 0.0 {
                let (fa, ra) = f(w.k0 - 1);
                let (fb, rb) = f(w.k0);
                let f_tau = fb + (fa - fb) * w.lead / dt;
                acc += 0.5 * w.lead * (f_tau + fb);
                reg |= ra || rb;
            }
            let (mut prev, r0) = f(w.k0);
            reg |= r0;
            for k in w.k0 + 1..=k1 {
                let (cur, rk) = f(k);
                acc += 0.5 * dt * (prev + cur);
                reg |= rk;
                prev = cur;
            }
            if tail > 0.0 {
                let (fb, rb) = f(k1 + 1);
                let f_t = prev + (fb - prev) * tail / dt;
                acc += 0.5 * tail * (prev + f_t);
                reg |= rb;
            }
        }
        values[i] = acc;
        regularized[i] = reg;
    }
    Ok(KernelSlice { values, regularized })
}

/// Accumulated kernel `K(x, t_k)` for every stored sample `t_k ≥ τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryState {
    pub c: f64,
    pub tau: f64,
    /// Kernel on the samples from the first `t_k ≥ τ` onwards.
    pub kernel: RealSeries,
    /// True exactly where the integrand sample at `(t_k, x)` was clamped.
    pub regularized_mask: Vec<bool>,
}

impl MemoryState {
    pub fn accumulate(history: &FieldHistory, c: f64, tau: f64, node_floor: f64) -> Result<Self> {
        check_floor(node_floor)?;
        if !c.is_finite() {
            return Err(Error::invalid("c", "must be finite"));
        }
        let w = Window::locate(&history.times, tau, tau)?;
        let times = history.times.tail(w.k0).expect("k0 within range");
        let nx = history.grid.len();
        let dt = history.times.dt();
        let mut kernel = Vec::with_capacity(nx * times.len());
        let mut mask = Vec::with_capacity(nx * times.len());
        let mut acc = vec![0.0; nx];
        let mut prev = vec![0.0; nx];
        for i in 0..nx {
            let (fb, rb) = integrand(history, w.k0, i, node_floor);
            if w.lead > 0.0 {
                let (fa, _) = integrand(history, w.k0 - 1, i, node_floor);
                let f_tau = fb + (fa - fb) * w.lead / dt;
                acc[i] = 0.5 * w.lead * (f_tau + fb);
            }
            prev[i] = fb;
            mask.push(rb);
        }
        kernel.extend_from_slice(&acc);
        for k in w.k0 + 1..history.times.len() {
            for i in 0..nx {
                let (f, r) = integrand(history, k, i, node_floor);
                acc[i] += 0.5 * dt * (prev[i] + f);
                prev[i] = f;
                mask.push(r);
            }
            kernel.extend_from_slice(&acc);
        }
        Ok(MemoryState { c, tau, kernel: RealSeries::new(history.grid, times, kernel)?, regularized_mask: mask })
    }
}

/// Which formula produced a [`NoneqDensity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensitySource {
    /// `|Ψ|²(1 + cK)`.
    Linear,
    /// Fixed point of `|Ψ|²·exp(c∫dt'/ρ)`.
    Exponential,
}

/// A non-equilibrium density surface.
#[derive(Debug, Clone, PartialEq)]
pub struct NoneqDensity {
    pub density: RealSeries,
    pub equilibrium: RealSeries,
    pub kernel: RealSeries,
    pub c: f64,
    pub tau: f64,
    pub source: DensitySource,
    /// True where the kernel at `(t_k, x)` includes a clamped sample.
    pub regularized: Vec<bool>,
    /// First sample time at which an unregularised point has `ρ < 0`.
    pub negativity_time: Option<f64>,
    /// Fixed-point iterations used (1 for the linear form).
    pub iterations: usize,
}

impl NoneqDensity {
    fn finish(mut self) -> Self {
        self.negativity_time = first_negative_sample(&self).map(|(k, _)| self.density.times.t(k));
        self
    }

    /// Assembles a surface from per-point results in row-major (time, x) order.
    pub fn from_points(grid: Grid1D, times: TimeGrid, c: f64, tau: f64, points: &[SurfacePoint]) -> Result<Self> {
        if points.len() != grid.len() * times.len() {
            return Err(Error::Shape(format!("{} points for {} × {}", points.len(), times.len(), grid.len())));
        }
        let col = |f: fn(&SurfacePoint) -> f64| RealSeries::new(grid, times, points.iter().map(f).collect());
        Ok(NoneqDensity {
            density: col(|p| p.density)?,
            equilibrium: col(|p| p.equilibrium)?,
            kernel: col(|p| p.kernel)?,
            c,
            tau,
            source: DensitySource::Linear,
            regularized: points.iter().map(|p| p.regularized).collect(),
            negativity_time: None,
            iterations: 1,
        }
        .finish())
    }
}

fn cumulative_mask(mask: &[bool], nx: usize) -> Vec<bool> {
    let mut out = mask.to_vec();
    for j in nx..out.len() {
        out[j] |= out[j - nx];
    }
    out
}

/// `ρ = |Ψ|²(1 + cK)` on every stored sample `t_k ≥ τ`.
pub fn noneq_density(history: &FieldHistory, c: f64, tau: f64, node_floor: f64) -> Result<NoneqDensity> {
    let state = MemoryState::accumulate(history, c, tau, node_floor)?;
    let nx = history.grid.len();
    let k0 = history.times.index_of(state.kernel.times.t0()).expect("tail of history");
    let eq: Vec<f64> = (k0..history.times.len()).flat_map(|k| history.slice(k).iter().map(|z| z.norm_sqr())).collect();
    let equilibrium = RealSeries::new(history.grid, state.kernel.times, eq)?;
    let density = equilibrium.zip_with(&state.kernel, |r, k| r * (1.0 + c * k))?;
    let regularized = cumulative_mask(&state.regularized_mask, nx);
    Ok(NoneqDensity {
        density,
        equilibrium,
        kernel: state.kernel,
        c,
        tau,
        source: DensitySource::Linear,
        regularized,
        negativity_time: None,
        iterations: 1,
    }
    .finish())
}

/// `∫ dt/ρ` over one interval of length `dt` with `ρ` linear from `a` to `b`.
fn reciprocal_linear_integral(a: f64, b: f64, dt: f64) -> f64 {
    let r = b / a - 1.0;
    if r.abs() < 1e-6 {
        dt / a * (1.0 - r / 2.0 + r * r / 3.0 - r * r * r / 4.0)
    } else {
        dt * log1p(r) / (a * r)
    }
}

/// Fixed-point solution of `ρ = |Ψ|²·exp(c∫_τ^t dt'/ρ(t'))`, seeded with
/// `ρ⁰ = |Ψ|²` and iterated until successive iterates differ by less than
/// `fp_tol` in the max norm.
///
/// Samples flagged as regularised (a node met at or before them) are held at
/// `|Ψ|²`, since the clamped integral there overflows the exponential.
pub fn noneq_density_exp(
    history: &FieldHistory,
    c: f64,
    tau: f64,
    node_floor: f64,
    max_iter: usize,
    fp_tol: f64,
) -> Result<NoneqDensity> {
    if !(fp_tol.is_finite() && fp_tol > 0.0) {
        return Err(Error::invalid("fp_tol", "must be finite and > 0"));
    }
    if max_iter == 0 {
        return Err(Error::invalid("max_iter", "must be ≥ 1"));
    }
    let state = MemoryState::accumulate(history, c, tau, node_floor)?;
    let w = Window::locate(&history.times, tau, tau)?;
    let times = state.kernel.times;
    let nx = history.grid.len();
    let nt = times.len();
    let dt = times.dt();
    let k0 = w.k0;
    let clamp = |r: f64| r.max(node_floor);
    let seed: Vec<f64> = (k0..k0 + nt).flat_map(|k| history.slice(k).iter().map(|z| z.norm_sqr())).collect();
    // |Ψ(τ)|² by linear interpolation when τ is between samples
    let rho_tau: Vec<f64> = (0..nx)
        .map(|i| {
            let b = seed[i];
            if w.lead > 0.0 {
                let a = history.slice(k0 - 1)[i].norm_sqr();
                b + (a - b) * w.lead / dt
            } else {
                b
            }
        })
        .collect();

    let regularized = cumulative_mask(&state.regularized_mask, nx);
    let mut current = seed.clone();
    let mut last_change = f64::INFINITY;
    let mut growth = 0;
    for iter in 1..=max_iter {
        let mut next = vec![0.0; nx * nt];
        for i in 0..nx {
            let mut integral = if w.lead > 0.0 {
                reciprocal_linear_integral(clamp(rho_tau[i]), clamp(current[i]), w.lead)
            } else {
                0.0
            };
            next[i] = if regularized[i] { seed[i] } else { seed[i] * exp(c * integral) };
            for k in 1..nt {
                if regularized[k * nx + i] {
                    next[k * nx + i] = seed[k * nx + i];
                    continue;
                }
                let a = clamp(current[(k - 1) * nx + i]);
                let b = clamp(current[k * nx + i]);
                integral += reciprocal_linear_integral(a, b, dt);
                next[k * nx + i] = seed[k * nx + i] * exp(c * integral);
            }
        }
        let change = crate::stencil::max_abs(&next.iter().zip(&current).map(|(a, b)| a - b).collect::<Vec<_>>());
        if !change.is_finite() {
            return Err(Error::NoConvergence { what: "exponential density", iterations: iter, residual: change });
        }
        current = next;
        if change < fp_tol {
            let equilibrium = RealSeries::new(history.grid, times, seed)?;
            return Ok(NoneqDensity {
                density: RealSeries::new(history.grid, times, current)?,
                equilibrium,
                kernel: state.kernel,
                c,
                tau,
                source: DensitySource::Exponential,
                regularized,
                negativity_time: None,
                iterations: iter,
            }
            .finish());
        }
        growth = if change > last_change { growth + 1 } else { 0 };
        if growth >= 5 {
            return Err(Error::NoConvergence { what: "exponential density", iterations: iter, residual: change });
        }
        last_change = change;
    }
    Err(Error::NoConvergence { what: "exponential density", iterations: max_iter, residual: last_change })
}

fn first_negative_sample(d: &NoneqDensity) -> Option<(usize, usize)> {
    let nx = d.density.grid.len();
    (0..d.density.times.len())
        .find_map(|k| (0..nx).find(|&i| !d.regularized[k * nx + i] && d.density.get(k, i) < 0.0).map(|i| (k, i)))
}

/// Where and when a density first turns negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeOnset {
    /// Zero crossing, linearly interpolated between the last non-negative and
    /// the first negative sample at `x`.
    pub t: f64,
    pub x: f64,
    pub grid_index: usize,
    /// First negative sample at `x`.
    pub time_index: usize,
    pub value: f64,
}

/// Result of [`positivity_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    /// `None` certifies `ρ ≥ 0` on every unregularised sample.
    pub earliest: Option<NegativeOnset>,
    pub min_density: f64,
    /// Samples excluded because their kernel was clamped.
    pub skipped: usize,
}

/// Earliest negative density over the computed window, ignoring samples whose
/// kernel was regularised at a node.
pub fn positivity_scan(d: &NoneqDensity) -> PositivityReport {
    let nx = d.density.grid.len();
    let nt = d.density.times.len();
    let dt = d.density.times.dt();
    let mut earliest: Option<NegativeOnset> = None;
    let mut min_density = f64::INFINITY;
    let mut skipped = 0;
    for i in 0..nx {
        let mut found = false;
        for k in 0..nt {
            if d.regularized[k * nx + i] {
                skipped += 1;
                continue;
            }
            let v = d.density.get(k, i);
            min_density = min_density.min(v);
            if found || v >= 0.0 {
                continue;
            }
            found = true;
            let t = if k == 0 || d.regularized[(k - 1) * nx + i] {
                d.density.times.t(k)
            } else {
                let prev = d.density.get(k - 1, i);
                d.density.times.t(k - 1) + dt * prev / (prev - v)
            };
            if earliest.map_or(true, |e| t < e.t) {
                earliest = Some(NegativeOnset { t, x: d.density.grid.x(i), grid_index: i, time_index: k, value: v });
            }
        }
    }
    PositivityReport { earliest, min_density, skipped }
}

/// How a continuous provider's kernel is integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelPath {
    /// `∫_τ^t dt'/|Ψ(x,t')|²` at fixed `x`, by adaptive Simpson.
    FixedPoint(QuadOptions),
    /// `∫_τ^t dt'/|Ψ(X(t'),t')|²` along the Bohmian path with `X(t) = x`,
    /// integrated backwards with `steps` RK4 steps.
    AlongFlow { steps: usize },
}

impl KernelPath {
    pub fn fixed_point() -> Self {
        KernelPath::FixedPoint(QuadOptions::default())
    }

    pub fn along_flow() -> Self {
        KernelPath::AlongFlow { steps: 256 }
    }
}

/// Kernel and density at one surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub density: f64,
    pub equilibrium: f64,
    pub kernel: f64,
    pub regularized: bool,
}

/// Kernel of a continuous provider at `(x, t)` for the window `[τ, t]`.
/// Returns the kernel and whether the integrand was clamped anywhere.
pub fn provider_kernel<W: WaveFunction + ?Sized>(
    w: &W,
    x: f64,
    t: f64,
    tau: f64,
    node_floor: f64,
    path: KernelPath,
) -> Result<(f64, bool)> {
    check_floor(node_floor)?;
    w.check_domain(x)?;
    if !(tau.is_finite() && t.is_finite()) {
        return Err(Error::invalid("tau", "window limits must be finite"));
    }
    if tau > t {
        return Err(Error::Precondition(format!("need tau ≤ t, got tau = {tau}, t = {t}")));
    }
    if tau == t {
        return Ok((0.0, false));
    }
    let clamped = Cell::new(false);
    let recip = |r: f64| {
        if r < node_floor {
            clamped.set(true);
            1.0 / node_floor
        } else {
            1.0 / r
        }
    };
    match path {
        KernelPath::FixedPoint(opts) => {
            let q = adaptive_simpson(|s| recip(w.density(x, s)), tau, t, opts);
            // next to a node 1/|Ψ|² is a cancelling sum; its rounding noise
            // bounds what any refinement can deliver
            if !(q.converged || q.roundoff_limited) {
                return Err(Error::NoConvergence {
                    what: "kernel quadrature",
                    iterations: q.evaluations,
                    residual: q.error,
                });
            }
            Ok((q.value, clamped.get()))
        }
        KernelPath::AlongFlow { steps } => {
            if steps == 0 {
                return Err(Error::invalid("steps", "must be ≥ 1"));
            }
            // σ runs from 0 to t − τ with s = t − σ; y = (X, J).
            let h = (t - tau) / steps as f64;
            let rhs = |sigma: f64, xpos: f64| -> Result<(f64, f64)> {
                w.check_domain(xpos)?;
                let s = t - sigma;
                Ok((-w.velocity(xpos, s), recip(w.density(xpos, s))))
            };
            let mut xpos = x;
            let mut j = 0.0;
            for n in 0..steps {
                let sigma = n as f64 * h;
                let (a1, b1) = rhs(sigma, xpos)?;
                let (a2, b2) = rhs(sigma + 0.5 * h, xpos + 0.5 * h * a1)?;
                let (a3, b3) = rhs(sigma + 0.5 * h, xpos + 0.5 * h * a2)?;
                let (a4, b4) = rhs(sigma + h, xpos + h * a3)?;
                xpos += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
                j += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            }
            Ok((j, clamped.get()))
        }
    }
}

/// Density `|Ψ|²(1 + cK)` of a continuous provider at one point.
pub fn surface_point<W: WaveFunction + ?Sized>(
    w: &W,
    x: f64,
    t: f64,
    tau: f64,
    c: f64,
    node_floor: f64,
    path: KernelPath,
) -> Result<SurfacePoint> {
    if !c.is_finite() {
        return Err(Error::invalid("c", "must be finite"));
    }
    let equilibrium = w.density(x, t);
    let (kernel, regularized) = if c == 0.0 { (0.0, false) } else { provider_kernel(w, x, t, tau, node_floor, path)? };
    Ok(SurfacePoint { density: equilibrium * (1.0 + c * kernel), equilibrium, kernel, regularized })
}

/// Linear-form density surface of a continuous provider on `grid × times`.
/// Every time sample must satisfy `t ≥ τ`.
pub fn noneq_surface<W: WaveFunction + ?Sized>(
    w: &W,
    grid: Grid1D,
    times: TimeGrid,
    tau: f64,
    c: f64,
    node_floor: f64,
    path: KernelPath,
) -> Result<NoneqDensity> {
    if times.t0() < tau {
        return Err(Error::Precondition(format!("surface starts at {} before tau = {tau}", times.t0())));
    }
    let mut points = Vec::with_capacity(grid.len() * times.len());
    for t in times.times() {
        for x in grid.points() {
            points.push(surface_point(w, x, t, tau, c, node_floor, path)?);
        }
    }
    NoneqDensity::from_points(grid, times, c, tau, &points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::StationaryState;
    use crate::PhysicalParams;

    fn eigen_history(n: u32, nx: usize, nt: usize, dt: f64) -> (StationaryState, FieldHistory) {
        let s = StationaryState::new(n, 1.0, PhysicalParams::default()).unwrap();
        let grid = Grid1D::new(0.0, 1.0, nx).unwrap();
        let times = TimeGrid::new(0.0, dt, nt).unwrap();
        (s, FieldHistory::from_provider(&s, grid, times).unwrap())
    }

    #[test]
    fn c_examples() {
        assert_eq!(compute_c(0.4, -0.4 * 0.25, 0.4, 0.25).unwrap(), 0.0);
        assert_eq!(compute_c(1.0, 0.05, 1.0, 0.0).unwrap(), 0.05);
        assert!(compute_c(1.0, f64::NAN, 1.0, 0.0).is_err());
    }

    #[test]
    fn eigenstate_kernel_midpoint() {
        let (_, h) = eigen_history(1, 33, 41, 0.025);
        let k = memory_kernel(&h, 0.1, 0.8, 1e-12).unwrap();
        // |ψ|² = 2 at x = 1/2
        assert!((k.values[16] - 0.7 * 0.5).abs() < 1e-13);
        assert!(!k.regularized[16]);
        assert!(k.regularized[0]);
        // mid-interval limits
        let k = memory_kernel(&h, 0.1137, 0.1202, 1e-12).unwrap();
        assert!((k.values[16] - 0.0065 * 0.5).abs() < 1e-14);
    }

    #[test]
    fn kernel_coverage_errors() {
        let (_, h) = eigen_history(1, 16, 11, 0.1);
        assert!(matches!(memory_kernel(&h, -0.5, 0.5, 1e-12), Err(Error::Coverage { .. })));
        assert!(matches!(memory_kernel(&h, 0.0, 1.5, 1e-12), Err(Error::Coverage { .. })));
        assert!(matches!(memory_kernel(&h, 0.6, 0.5, 1e-12), Err(Error::Precondition(_))));
    }

    #[test]
    fn equilibrium_reduction_is_exact() {
        let (_, h) = eigen_history(2, 20, 15, 0.01);
        let d = noneq_density(&h, 0.0, 0.0, 1e-12).unwrap();
        assert_eq!(d.density, d.equilibrium);
        assert_eq!(d.negativity_time, None);
    }

    #[test]
    fn state_starts_from_zero_and_grows() {
        let (_, h) = eigen_history(3, 24, 30, 0.01);
        let st = MemoryState::accumulate(&h, 0.2, 0.043, 1e-12).unwrap();
        assert!((st.kernel.times.t0() - 0.05).abs() < 1e-12);
        for i in 0..24 {
            for k in 1..st.kernel.times.len() {
                assert!(st.kernel.get(k, i) >= st.kernel.get(k - 1, i));
            }
        }
    }

    #[test]
    fn exponential_form_c_zero_single_iteration() {
        let (_, h) = eigen_history(1, 20, 12, 0.01);
        let d = noneq_density_exp(&h, 0.0, 0.0, 1e-12, 10, 1e-14).unwrap();
        assert_eq!(d.iterations, 1);
        assert_eq!(d.density, d.equilibrium);
    }

    #[test]
    fn exponential_iteration_limit() {
        let s = StationaryState::new(1, 1.0, PhysicalParams::default()).unwrap();
        let grid = Grid1D::new(0.2, 0.8, 16).unwrap();
        let h = FieldHistory::from_provider(&s, grid, TimeGrid::new(0.0, 0.05, 40).unwrap()).unwrap();
        let err = noneq_density_exp(&h, 0.5, 0.0, 1e-12, 2, 1e-15).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 2, .. }));
    }

    #[test]
    fn exponential_form_holds_nodes_at_equilibrium() {
        // grid ends sit on the walls, where |Ψ|² vanishes
        let (_, h) = eigen_history(1, 21, 41, 0.005);
        let d = noneq_density_exp(&h, 0.1, 0.0, 1e-12, 200, 1e-13).unwrap();
        let nx = 21;
        for (j, r) in d.regularized.iter().enumerate() {
            let (rho, eq) = (d.density.values()[j], d.equilibrium.values()[j]);
            assert!(rho.is_finite());
            if *r {
                assert_eq!(rho, eq);
            } else if j >= nx {
                assert!(rho > eq);
            }
        }
        assert!(d.regularized[0] && d.regularized[nx - 1] && !d.regularized[nx / 2]);
    }

    #[test]
    fn reciprocal_integral_branches_agree() {
        let a = 0.7;
        for &b in &[0.7, 0.7 * (1.0 + 5e-7), 0.7 * (1.0 + 2e-6), 1.3] {
            let exact = crate::quad::composite_simpson(|s| 1.0 / (a + (b - a) * s / 0.1), 0.0, 0.1, 4096);
            let got = reciprocal_linear_integral(a, b, 0.1);
            assert!((got - exact).abs() < 1e-13, "{b}: {got} vs {exact}");
        }
    }
}
