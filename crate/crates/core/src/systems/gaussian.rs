// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::field::WaveFunction;
use crate::grid::PhysicalParams;
use crate::math::{sq, sqrt, PI};
use crate::{Error, Result};

/// Free Gaussian packet with initial width `sigma0`, mean momentum `ħk0` and
/// initial centre `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub sigma0: f64,
    pub k0: f64,
    pub center: f64,
    params: PhysicalParams,
}

impl GaussianPacket {
    pub fn new(sigma0: f64, k0: f64, center: f64, params: PhysicalParams) -> Result<Self> {
        params.validate()?;
        if !(sigma0.is_finite() && sigma0 > 0.0) {
            return Err(Error::invalid("sigma0", "must be finite and > 0"));
        }
        if !(k0.is_finite() && center.is_finite()) {
            return Err(Error::invalid("k0", "k0 and center must be finite"));
        }
        Ok(GaussianPacket { sigma0, k0, center, params })
    }

    /// `1 + iħt/(2mσ0²)`.
    fn spread(&self, t: f64) -> Complex64 {
        Complex64::new(1.0, self.params.hbar * t / (2.0 * self.params.mass * sq(self.sigma0)))
    }

    /// Position-space width `σ(t) = σ0·√(1 + (ħt/2mσ0²)²)`.
    pub fn width(&self, t: f64) -> f64 {
        self.sigma0 * self.spread(t).norm()
    }

    /// Group velocity `ħk0/m`.
    pub fn group_velocity(&self) -> f64 {
        self.params.hbar * self.k0 / self.params.mass
    }
}

impl WaveFunction for GaussianPacket {
    fn psi(&self, x: f64, t: f64) -> Complex64 {
        let a = self.spread(t);
        let u = x - self.center;
        let p = self.params;
        let exponent = (Complex64::new(-sq(u) / (4.0 * sq(self.sigma0)), self.k0 * u)
            - Complex64::new(0.0, p.hbar * sq(self.k0) * t / (2.0 * p.mass)))
            / a;
        let norm = 1.0 / sqrt(sqrt(2.0 * PI * sq(self.sigma0)));
        exponent.exp() * norm / a.sqrt()
    }

    fn dpsi_dx(&self, x: f64, t: f64) -> Complex64 {
        let a = self.spread(t);
        let u = x - self.center;
        self.psi(x, t) * Complex64::new(-u / (2.0 * sq(self.sigma0)), self.k0) / a
    }

    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn params(&self) -> PhysicalParams {
        self.params
    }
}

/// Packet amplitude at `(x, t)`.
pub fn gaussian_psi(p: &GaussianPacket, x: f64, t: f64) -> Complex64 {
    p.psi(x, t)
}
