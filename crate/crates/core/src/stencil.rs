// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite-difference stencils.
//!
//! Interior points use second-order central differences. Spatial boundary
//! points use one-sided third-order formulas (second-order in time), so every
//! output has the same length as its input and the ends are never the least
//! accurate points.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::RealSeries;
use crate::{Error, Result};

/// First derivative of uniformly spaced samples.
pub fn gradient(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "gradient needs at least 3 samples");
    let mut d = vec![0.0; n];
    let inv = 0.5 / h;
    if n >= 4 {
        let inv6 = 1.0 / (6.0 * h);
        d[0] = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) * inv6;
        d[n - 1] = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) * inv6;
    } else {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    }
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) * inv;
    }
    d
}

/// Second derivative of uniformly spaced samples.
pub fn laplacian(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "laplacian needs at least 5 samples");
    let mut d = vec![0.0; n];
    let inv = 1.0 / (h * h);
    let inv12 = inv / 12.0;
    d[0] = (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) * inv12;
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    }
    d[n - 1] = (35.0 * f[n - 1] - 104.0 * f[n - 2] + 114.0 * f[n - 3] - 56.0 * f[n - 4] + 11.0 * f[n - 5]) * inv12;
    d
}

/// `∂/∂x` of every time slice.
pub fn series_dx(s: &RealSeries) -> RealSeries {
    let h = s.grid.spacing();
    let mut out = Vec::with_capacity(s.values().len());
    for k in 0..s.times.len() {
        out.extend(gradient(s.slice(k), h));
    }
    RealSeries::new(s.grid, s.times, out).expect("shape preserved")
}

/// `∂/∂t` at every grid point. Needs at least 3 time samples.
pub fn series_dt(s: &RealSeries) -> Result<RealSeries> {
    let nt = s.times.len();
    if nt < 3 {
        return Err(Error::Precondition("time derivative needs at least 3 time slices".into()));
    }
    let nx = s.grid.len();
    let inv = 0.5 / s.times.dt();
    let mut out = vec![0.0; nx * nt];
    for i in 0..nx {
        let f = |k: usize| s.get(k, i);
        out[i] = (-3.0 * f(0) + 4.0 * f(1) - f(2)) * inv;
        for k in 1..nt - 1 {
            out[k * nx + i] = (f(k + 1) - f(k - 1)) * inv;
        }
        out[(nt - 1) * nx + i] = (3.0 * f(nt - 1) - 4.0 * f(nt - 2) + f(nt - 3)) * inv;
    }
    RealSeries::new(s.grid, s.times, out)
}

/// Eulerian convective derivative `∂f/∂t + v·∂f/∂x`.
pub fn convective(f: &RealSeries, v: &RealSeries) -> Result<RealSeries> {
    f.check_aligned(v)?;
    let ft = series_dt(f)?;
    let fx = series_dx(f);
    let vals = ft.values().iter().zip(fx.values()).zip(v.values()).map(|((a, b), c)| a + c * b).collect();
    RealSeries::new(f.grid, f.times, vals)
}

/// Maximum absolute value; NaN if any entry is NaN.
pub fn max_abs(values: &[f64]) -> f64 {
    let mut m = 0.0_f64;
    for v in values {
        let a = v.abs();
        if a.is_nan() {
            return f64::NAN;
        }
        m = m.max(a);
    }
    m
}

/// Replaces masked entries by the value at the nearest unmasked index (ties go
/// left). Leaves `values` untouched when nothing is unmasked.
pub fn fill_from_nearest(values: &mut [f64], mask: &[bool]) {
    let n = values.len();
    let valid: Vec<usize> = (0..n).filter(|&i| !mask[i]).collect();
    if valid.is_empty() {
        return;
    }
    let mut j = 0;
    for i in 0..n {
        if !mask[i] {
            continue;
        }
        while j + 1 < valid.len() && valid[j + 1] < i {
            j += 1;
        }
        let left = valid[j];
        let pick = if left > i {
            left
        } else if j + 1 < valid.len() {
            let right = valid[j + 1];
            if i - left <= right - i {
                left
            } else {
                right
            }
        } else {
            left
        };
        values[i] = values[pick];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_exact_on_quadratics() {
        let h = 0.1;
        let f: Vec<f64> = (0..10)
            .map(|i| {
                let x = i as f64 * h;
                2.0 * x * x - x + 3.0
            })
            .collect();
        let d = gradient(&f, h);
        let dd = laplacian(&f, h);
        for i in 0..10 {
            let x = i as f64 * h;
            assert!((d[i] - (4.0 * x - 1.0)).abs() < 1e-12);
            assert!((dd[i] - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_laplacian_exact_on_cubics() {
        let h = 0.05;
        let f: Vec<f64> = (0..8).map(|i| (i as f64 * h).powi(3)).collect();
        let dd = laplacian(&f, h);
        assert!((dd[0] - 0.0).abs() < 1e-9);
        assert!((dd[7] - 6.0 * 7.0 * h).abs() < 1e-9);
    }

    #[test]
    fn nearest_fill() {
        let mut v = [0.0, 1.0, 9.0, 9.0, 9.0, 5.0, 9.0];
        let m = [true, false, true, true, true, false, true];
        fill_from_nearest(&mut v, &m);
        assert_eq!(v, [1.0, 1.0, 1.0, 1.0, 5.0, 5.0, 5.0]);
    }

    #[test]
    fn max_abs_propagates_nan() {
        assert!(max_abs(&[1.0, f64::NAN, 2.0]).is_nan());
        assert_eq!(max_abs(&[1.0, -3.0, 2.0]), 3.0);
    }
}
