// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Physical constants, the uniform spatial grid and the uniform time grid.

use alloc::format;

use crate::math::floor;
use crate::{Error, Result};

/// Reduced Planck constant and particle mass. Natural units by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams { hbar: 1.0, mass: 1.0 }
    }
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let p = PhysicalParams { hbar, mass };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::invalid("hbar", "must be finite and > 0"));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::invalid("mass", "must be finite and > 0"));
        }
        Ok(())
    }
}

/// Uniform grid on `[x_min, x_max]` with `n_points` nodes, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::invalid("grid", format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::invalid(
                "n_points",
                format!("need at least {} points, got {n_points}", Self::MIN_POINTS),
            ));
        }
        Ok(Grid1D { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Cell index `i` and fractional offset `s ∈ [0, 1]` with
    /// `x = x(i) + s·h`. `None` outside the grid.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !self.contains(x) {
            return None;
        }
        let u = (x - self.x_min) / self.spacing();
        let i = (floor(u) as usize).min(self.n_points - 2);
        Some((i, u - i as f64))
    }

    /// Linear interpolation of grid samples at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Option<f64> {
        let (i, s) = self.locate(x)?;
        Some(values[i] * (1.0 - s) + values[i + 1] * s)
    }
}

/// Uniform time samples `t0 + k·dt`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::invalid("t0", "must be finite"));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", "must be finite and > 0"));
        }
        if n == 0 {
            return Err(Error::invalid("n_times", "need at least one time sample"));
        }
        Ok(TimeGrid { t0, dt, n })
    }

    /// Samples spanning `[t0, t1]` with `n` points.
    pub fn spanning(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if n < 2 || !(t1 > t0) {
            return Err(Error::invalid("time window", format!("need t1 > t0 and n ≥ 2, got [{t0}, {t1}], n = {n}")));
        }
        Self::new(t0, (t1 - t0) / (n - 1) as f64, n)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn end(&self) -> f64 {
        self.t(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.t(k))
    }

    /// Sub-grid starting at sample `k0`.
    pub fn tail(&self, k0: usize) -> Option<TimeGrid> {
        (k0 < self.n).then(|| TimeGrid { t0: self.t(k0), dt: self.dt, n: self.n - k0 })
    }

    /// Index of the sample equal to `t` within `1e-9·dt`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let u = (t - self.t0) / self.dt;
        let k = crate::math::round(u);
        if k < 0.0 || (u - k).abs() > 1e-9 || k as usize >= self.n {
            None
        } else {
            Some(k as usize)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid1D::new(1.0, 0.0, 16).is_err());
        assert!(Grid1D::new(0.0, 1.0, 7).is_err());
        assert!(PhysicalParams::new(0.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0).is_err());
    }

    #[test]
    fn grid_locate_and_interpolate() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        assert_eq!(g.x(10), 1.0);
        let (i, s) = g.locate(0.25).unwrap();
        assert_eq!(i, 2);
        assert!((s - 0.5).abs() < 1e-12);
        assert_eq!(g.locate(1.0).unwrap().0, 9);
        let v: alloc::vec::Vec<f64> = g.points().map(|x| 3.0 * x - 1.0).collect();
        assert!((g.interpolate(&v, 0.437).unwrap() - 0.311).abs() < 1e-12);
        assert!(g.interpolate(&v, 1.5).is_none());
    }

    #[test]
    fn time_grid_index() {
        let tg = TimeGrid::new(0.5, 0.1, 5).unwrap();
        assert_eq!(tg.index_of(0.8), Some(3));
        assert_eq!(tg.index_of(0.85), None);
        assert_eq!(tg.index_of(1.0), None);
        assert!((tg.end() - 0.9).abs() < 1e-15);
    }
}
