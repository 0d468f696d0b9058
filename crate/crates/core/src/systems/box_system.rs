// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::format;

use num_complex::Complex64;

use super::box_eigenfrequency;
use crate::field::WaveFunction;
use crate::grid::PhysicalParams;
use crate::math::{atan2, cos, round, sin, sq, sqrt, PI};
use crate::{Error, Result};

/// Smallest `|sin²(n1πx/L) − sin²(n2πx/L)|` accepted by [`box_noneq_closed`].
pub const DEFAULT_POLE_TOLERANCE: f64 = 1e-3;

/// Equal-weight superposition of two infinite-well eigenmodes,
/// `Ψ = L^{-1/2}[sin(n1πx/L)e^{−iω1 t} + sin(n2πx/L)e^{−iω2 t}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSystem {
    length: f64,
    modes: (u32, u32),
    omega: (f64, f64),
    params: PhysicalParams,
    pole_tolerance: f64,
}

impl BoxSystem {
    /// Mode frequencies default to the well eigenvalues.
    pub fn new(length: f64, n1: u32, n2: u32, params: PhysicalParams) -> Result<Self> {
        params.validate()?;
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid("L", format!("must be finite and > 0, got {length}")));
        }
        if n1 == 0 || n2 == 0 || n1 == n2 {
            return Err(Error::invalid("modes", format!("need distinct positive mode numbers, got ({n1}, {n2})")));
        }
        let omega = (box_eigenfrequency(n1, length, &params), box_eigenfrequency(n2, length, &params));
        Ok(BoxSystem { length, modes: (n1, n2), omega, params, pole_tolerance: DEFAULT_POLE_TOLERANCE })
    }

    /// Overrides the mode frequencies, which then need not match the well.
    pub fn with_frequencies(mut self, omega1: f64, omega2: f64) -> Result<Self> {
        if !(omega1.is_finite() && omega2.is_finite()) {
            return Err(Error::invalid("omega", "frequencies must be finite"));
        }
        self.omega = (omega1, omega2);
        Ok(self)
    }

    pub fn with_pole_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::invalid("pole_tolerance", "must be finite and ≥ 0"));
        }
        self.pole_tolerance = tol;
        Ok(self)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn modes(&self) -> (u32, u32) {
        self.modes
    }

    pub fn omega(&self) -> (f64, f64) {
        self.omega
    }

    pub fn delta_omega(&self) -> f64 {
        self.omega.1 - self.omega.0
    }

    /// `2π/|δω|`, infinite for degenerate frequencies.
    pub fn beat_period(&self) -> f64 {
        2.0 * PI / self.delta_omega().abs()
    }

    fn mode_values(&self, x: f64) -> (f64, f64) {
        let u = PI * x / self.length;
        (sin(self.modes.0 as f64 * u), sin(self.modes.1 as f64 * u))
    }

    fn check(&self, x: f64) -> Result<()> {
        if x.is_finite() && (0.0..=self.length).contains(&x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: 0.0, hi: self.length })
        }
    }
}

impl WaveFunction for BoxSystem {
    fn psi(&self, x: f64, t: f64) -> Complex64 {
        let (s1, s2) = self.mode_values(x);
        (Complex64::from_polar(s1, -self.omega.0 * t) + Complex64::from_polar(s2, -self.omega.1 * t))
            / sqrt(self.length)
    }

    fn dpsi_dx(&self, x: f64, t: f64) -> Complex64 {
        let k = PI / self.length;
        let (n1, n2) = (self.modes.0 as f64, self.modes.1 as f64);
        let d1 = n1 * k * cos(n1 * k * x);
        let d2 = n2 * k * cos(n2 * k * x);
        (Complex64::from_polar(1.0, -self.omega.0 * t) * d1 + Complex64::from_polar(1.0, -self.omega.1 * t) * d2)
            / sqrt(self.length)
    }

    fn density(&self, x: f64, t: f64) -> f64 {
        box_equilibrium_density(self, x, t)
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.length)
    }

    fn params(&self) -> PhysicalParams {
        self.params
    }
}

/// Amplitude of the two-mode superposition. Fails outside `[0, L]`.
pub fn box_psi(sys: &BoxSystem, x: f64, t: f64) -> Result<Complex64> {
    sys.check(x)?;
    Ok(sys.psi(x, t))
}

/// `|Ψ|² = [s1² + s2² + 2 s1 s2 cos(δω t)]/L`.
pub fn box_equilibrium_density(sys: &BoxSystem, x: f64, t: f64) -> f64 {
    let (s1, s2) = sys.mode_values(x);
    (s1 * s1 + s2 * s2 + 2.0 * s1 * s2 * cos(sys.delta_omega() * t)) / sys.length
}

/// Continuous antiderivative (in θ) of `√(AB)/(2(a + b cos θ))`, i.e.
/// `atan(√(A/B)·tan(θ/2))` continued across the branch points θ = (2k+1)π.
fn beat_antiderivative(theta: f64, sqrt_a: f64, sqrt_b: f64) -> f64 {
    let k = round(theta / (2.0 * PI));
    let half = 0.5 * (theta - 2.0 * PI * k);
    atan2(sqrt_a * sin(half), sqrt_b * cos(half)) + PI * k
}

/// Closed-form memory-kernel density of the box superposition over the window
/// `[t − δτ, t]`:
///
/// `ρ = |Ψ|²·(1 + c·K)`, `K = (2L/(δω·|s1² − s2²|))·[F(δω t) − F(δω(t − δτ))]`
///
/// with `A = (s1 − s2)²`, `B = (s1 + s2)²`, `|s1² − s2²| = √(AB)` and
/// `F(θ) = atan(√(A/B)·tan(θ/2))` continued across its branch points.
///
/// Points where `|s1² − s2²|` falls below the pole tolerance are refused with
/// [`Error::PoleProximity`]; the quadrature path handles them.
pub fn box_noneq_closed(sys: &BoxSystem, x: f64, t: f64, delta_tau: f64, c: f64) -> Result<f64> {
    sys.check(x)?;
    if !(delta_tau.is_finite() && delta_tau >= 0.0) {
        return Err(Error::invalid("delta_tau", format!("must be finite and ≥ 0, got {delta_tau}")));
    }
    if !(c.is_finite() && t.is_finite()) {
        return Err(Error::invalid("c", "c and t must be finite"));
    }
    let rho_eq = box_equilibrium_density(sys, x, t);
    if c == 0.0 || delta_tau == 0.0 {
        return Ok(rho_eq);
    }
    let (s1, s2) = sys.mode_values(x);
    let denominator = s1 * s1 - s2 * s2;
    if denominator.abs() < sys.pole_tolerance || denominator == 0.0 {
        return Err(Error::PoleProximity { x, denominator, tolerance: sys.pole_tolerance });
    }
    let a = sq(s1 - s2);
    let b = sq(s1 + s2);
    let tau = t - delta_tau;
    let dw = sys.delta_omega();
    let kernel = if dw == 0.0 {
        sys.length * delta_tau / b
    } else {
        let (ra, rb) = (sqrt(a), sqrt(b));
        let span = beat_antiderivative(dw * t, ra, rb) - beat_antiderivative(dw * tau, ra, rb);
        2.0 * sys.length * span / (dw * denominator.abs())
    };
    Ok(rho_eq * (1.0 + c * kernel))
}

/// A single well eigenstate `√(2/L)·sin(nπx/L)·e^{−iω_n t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryState {
    n: u32,
    length: f64,
    params: PhysicalParams,
}

impl StationaryState {
    pub fn new(n: u32, length: f64, params: PhysicalParams) -> Result<Self> {
        params.validate()?;
        if n == 0 {
            return Err(Error::invalid("n", "mode number must be positive"));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid("L", format!("must be finite and > 0, got {length}")));
        }
        Ok(StationaryState { n, length, params })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn omega(&self) -> f64 {
        box_eigenfrequency(self.n, self.length, &self.params)
    }

    /// `E_n = ħω_n`.
    pub fn energy(&self) -> f64 {
        self.params.hbar * self.omega()
    }
}

impl WaveFunction for StationaryState {
    fn psi(&self, x: f64, t: f64) -> Complex64 {
        let amp = sqrt(2.0 / self.length) * sin(self.n as f64 * PI * x / self.length);
        Complex64::from_polar(amp, -self.omega() * t)
    }

    fn dpsi_dx(&self, x: f64, t: f64) -> Complex64 {
        let k = self.n as f64 * PI / self.length;
        Complex64::from_polar(sqrt(2.0 / self.length) * k * cos(k * x), -self.omega() * t)
    }

    fn density(&self, x: f64, _t: f64) -> f64 {
        2.0 / self.length * sq(sin(self.n as f64 * PI * x / self.length))
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.length)
    }

    fn params(&self) -> PhysicalParams {
        self.params
    }
}

/// Eigenstate amplitude in natural units of `params`. Fails outside `[0, L]`.
pub fn stationary_psi(n: u32, length: f64, x: f64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
    let s = StationaryState::new(n, length, *params)?;
    s.check_domain(x)?;
    Ok(s.psi(x, t))
}
