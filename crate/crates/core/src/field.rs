// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Sampled fields and the continuous wavefunction interface.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::grid::{Grid1D, PhysicalParams, TimeGrid};
use crate::{Error, Result};

/// A wavefunction known in closed form (or by any other pointwise rule).
///
/// Implementors must be pure: equal arguments give bit-identical results.
pub trait WaveFunction {
    fn psi(&self, x: f64, t: f64) -> Complex64;

    /// Spatial derivative `∂Ψ/∂x`.
    fn dpsi_dx(&self, x: f64, t: f64) -> Complex64;

    /// Spatial domain `[lo, hi]` on which the provider is defined.
    fn domain(&self) -> (f64, f64);

    fn params(&self) -> PhysicalParams;

    fn density(&self, x: f64, t: f64) -> f64 {
        self.psi(x, t).norm_sqr()
    }

    /// Bohmian velocity `(ħ/m)·Im(Ψ*∂xΨ)/|Ψ|²`.
    fn velocity(&self, x: f64, t: f64) -> f64 {
        let psi = self.psi(x, t);
        let rho = psi.norm_sqr();
        if rho == 0.0 {
            return 0.0;
        }
        let p = self.params();
        p.hbar / p.mass * (psi.conj() * self.dpsi_dx(x, t)).im / rho
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if x.is_finite() && x >= lo && x <= hi {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo, hi })
        }
    }
}

impl<W: WaveFunction + ?Sized> WaveFunction for &W {
    fn psi(&self, x: f64, t: f64) -> Complex64 {
        (**self).psi(x, t)
    }
    fn dpsi_dx(&self, x: f64, t: f64) -> Complex64 {
        (**self).dpsi_dx(x, t)
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn params(&self) -> PhysicalParams {
        (**self).params()
    }
}

/// Wavefunction samples on a grid at a single time.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: Grid1D,
    pub time: f64,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid1D, time: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("psi", format!("non-finite amplitude at index {i}")));
        }
        Ok(ComplexField { grid, time, values })
    }

    pub fn sample(grid: Grid1D, time: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, time, grid.points().map(f).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `Σ|ψ|²·h` over the grid (trapezoid rule).
    pub fn norm(&self) -> f64 {
        let h = self.grid.spacing();
        let n = self.values.len();
        let inner: f64 = self.values[1..n - 1].iter().map(|z| z.norm_sqr()).sum();
        h * (inner + 0.5 * (self.values[0].norm_sqr() + self.values[n - 1].norm_sqr()))
    }
}

/// Wavefunction history: one [`ComplexField`] per time sample, stored row-major
/// by time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory {
    pub grid: Grid1D,
    pub times: TimeGrid,
    values: Vec<Complex64>,
}

impl FieldHistory {
    pub fn new(grid: Grid1D, times: TimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() * times.len() {
            return Err(Error::Shape(format!(
                "{} values for {} times × {} points",
                values.len(),
                times.len(),
                grid.len()
            )));
        }
        Ok(FieldHistory { grid, times, values })
    }

    pub fn from_fn(grid: Grid1D, times: TimeGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len() * times.len());
        for t in times.times() {
            values.extend(grid.points().map(|x| f(x, t)));
        }
        Self::new(grid, times, values)
    }

    pub fn from_provider<W: WaveFunction + ?Sized>(w: &W, grid: Grid1D, times: TimeGrid) -> Result<Self> {
        w.check_domain(grid.x_min())?;
        w.check_domain(grid.x_max())?;
        Self::from_fn(grid, times, |x, t| w.psi(x, t))
    }

    pub fn from_fields(fields: &[ComplexField], times: TimeGrid) -> Result<Self> {
        let grid = fields.first().ok_or_else(|| Error::Shape("empty field list".into()))?.grid;
        if fields.len() != times.len() {
            return Err(Error::Shape(format!("{} fields for {} times", fields.len(), times.len())));
        }
        let mut values = Vec::with_capacity(grid.len() * fields.len());
        for f in fields {
            if f.grid != grid {
                return Err(Error::Shape("fields live on different grids".into()));
            }
            values.extend_from_slice(f.values());
        }
        Self::new(grid, times, values)
    }

    pub fn slice(&self, k: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn field(&self, k: usize) -> ComplexField {
        ComplexField { grid: self.grid, time: self.times.t(k), values: self.slice(k).to_vec() }
    }

    pub fn density(&self) -> RealSeries {
        RealSeries { grid: self.grid, times: self.times, values: self.values.iter().map(|z| z.norm_sqr()).collect() }
    }
}

/// A real field sampled on a grid at every time of a [`TimeGrid`],
/// stored row-major by time.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSeries {
    pub grid: Grid1D,
    pub times: TimeGrid,
    values: Vec<f64>,
}

impl RealSeries {
    pub fn new(grid: Grid1D, times: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() * times.len() {
            return Err(Error::Shape(format!(
                "{} values for {} times × {} points",
                values.len(),
                times.len(),
                grid.len()
            )));
        }
        Ok(RealSeries { grid, times, values })
    }

    pub fn from_fn(grid: Grid1D, times: TimeGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len() * times.len());
        for t in times.times() {
            values.extend(grid.points().map(|x| f(x, t)));
        }
        RealSeries { grid, times, values }
    }

    /// Stacks per-time slices into a series.
    pub fn from_slices(grid: Grid1D, times: TimeGrid, slices: &[Vec<f64>]) -> Result<Self> {
        if slices.len() != times.len() {
            return Err(Error::Shape(format!("{} slices for {} times", slices.len(), times.len())));
        }
        let mut values = Vec::with_capacity(grid.len() * times.len());
        for s in slices {
            if s.len() != grid.len() {
                return Err(Error::Shape(format!("slice of {} values for {} points", s.len(), grid.len())));
            }
            values.extend_from_slice(s);
        }
        Ok(RealSeries { grid, times, values })
    }

    pub fn slice(&self, k: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.values[k * self.grid.len() + i]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealSeries {
        RealSeries { grid: self.grid, times: self.times, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &RealSeries, f: impl Fn(f64, f64) -> f64) -> Result<RealSeries> {
        self.check_aligned(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(RealSeries { grid: self.grid, times: self.times, values })
    }

    pub fn check_aligned(&self, other: &RealSeries) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape("series live on different grids".into()));
        }
        if self.times != other.times {
            return Err(Error::Shape("series live on different time grids".into()));
        }
        Ok(())
    }

    /// Values at time index `k` taken from `values` of a single time slice
    /// broadcast to every time.
    pub fn constant_in_time(grid: Grid1D, times: TimeGrid, slice: &[f64]) -> Result<RealSeries> {
        if slice.len() != grid.len() {
            return Err(Error::Shape(format!("slice of {} values for {} points", slice.len(), grid.len())));
        }
        let mut values = Vec::with_capacity(grid.len() * times.len());
        for _ in 0..times.len() {
            values.extend_from_slice(slice);
        }
        Ok(RealSeries { grid, times, values })
    }

    /// Maximum of `|value|` over the sub-rectangle `[x_lo, x_hi] × [t_lo, t_hi]`,
    /// scanning in a fixed order. Returns 0 for an empty selection.
    pub fn max_abs_within(&self, x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> f64 {
        let mut m = 0.0_f64;
        for (k, t) in self.times.times().enumerate() {
            if t < t_lo - 1e-12 || t > t_hi + 1e-12 {
                continue;
            }
            for (i, x) in self.grid.points().enumerate() {
                if x < x_lo - 1e-12 || x > x_hi + 1e-12 {
                    continue;
                }
                let a = self.get(k, i).abs();
                if a.is_nan() {
                    return f64::NAN;
                }
                m = m.max(a);
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        crate::stencil::max_abs(&self.values)
    }
}
