// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::box_eigenfrequency;
use crate::grid::PhysicalParams;
use crate::math::{sin, sqrt, PI};
use crate::quad::{adaptive_simpson, QuadOptions};
use crate::{Error, Result};

/// A time-independent Hamiltonian given by its spectrum in the infinite-well
/// eigenbasis `φ_n = √(2/L)·sin(nπx/L)`, and an initial state `Σ a_n φ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    length: f64,
    labels: Vec<u32>,
    energies: Vec<f64>,
    coefficients: Vec<Complex64>,
}

impl HamiltonianSpec {
    pub fn new(length: f64, labels: Vec<u32>, energies: Vec<f64>, coefficients: Vec<Complex64>) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid("L", "must be finite and > 0"));
        }
        if labels.is_empty() || labels.len() != energies.len() || labels.len() != coefficients.len() {
            return Err(Error::Shape(format!(
                "{} labels, {} energies, {} coefficients",
                labels.len(),
                energies.len(),
                coefficients.len()
            )));
        }
        if labels.contains(&0) {
            return Err(Error::invalid("labels", "eigenbasis labels start at 1"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("energies", "eigenvalues must be finite reals"));
        }
        let total: f64 = coefficients.iter().map(|a| a.norm_sqr()).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("coefficients", format!("Σ|a_n|² = {total}, expected 1")));
        }
        Ok(HamiltonianSpec { length, labels, energies, coefficients })
    }

    /// Well eigenvalues `E_n = ħω_n` for the given labels.
    pub fn box_levels(
        length: f64,
        labels: Vec<u32>,
        coefficients: Vec<Complex64>,
        params: &PhysicalParams,
    ) -> Result<Self> {
        let energies = labels.iter().map(|&n| params.hbar * box_eigenfrequency(n, length, params)).collect();
        Self::new(length, labels, energies, coefficients)
    }

    fn basis(&self, n: u32, x: f64) -> f64 {
        sqrt(2.0 / self.length) * sin(n as f64 * PI * x / self.length)
    }

    /// `Σ a_n e^{−iE_n t/ħ} φ_n(x)`.
    pub fn exact_psi(&self, x: f64, t: f64, params: &PhysicalParams) -> Complex64 {
        self.levels().map(|(n, e, a)| a * Complex64::from_polar(self.basis(n, x), -e * t / params.hbar)).sum()
    }

    /// `Σ a_n (1 − iE_n t/ħ) φ_n(x)`.
    pub fn truncated_psi(&self, x: f64, t: f64, params: &PhysicalParams) -> Complex64 {
        self.levels().map(|(n, e, a)| a * Complex64::new(1.0, -e * t / params.hbar) * self.basis(n, x)).sum()
    }

    fn levels(&self) -> impl Iterator<Item = (u32, f64, Complex64)> + '_ {
        self.labels.iter().zip(&self.energies).zip(&self.coefficients).map(|((&n, &e), &a)| (n, e, a))
    }

    fn max_abs_energy(&self) -> f64 {
        self.energies.iter().fold(0.0_f64, |m, e| m.max(e.abs()))
    }
}

/// Memory-kernel density of the first-order Dyson state.
///
/// The state is truncated to `ψ₁ = Σ a_n(1 − iE_n t/ħ)φ_n` and the result is
/// `|ψ₁(x,t)|²·(1 + c∫_τ^t dt'/|ψ₁(x,t')|²)`. The expansion is refused unless
/// `max_n|E_n|·max(|t|, |τ|)/ħ < 1`.
pub fn dyson_density(h: &HamiltonianSpec, t: f64, c: f64, tau: f64, x: f64, params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    if !(x.is_finite() && (0.0..=h.length).contains(&x)) {
        return Err(Error::OutOfDomain { x, lo: 0.0, hi: h.length });
    }
    if !(tau <= t) {
        return Err(Error::Precondition(format!("need tau ≤ t, got tau = {tau}, t = {t}")));
    }
    let value = h.max_abs_energy() * t.abs().max(tau.abs()) / params.hbar;
    if !(value < 1.0) {
        return Err(Error::SmallParameter { value });
    }
    let rho = h.truncated_psi(x, t, params).norm_sqr();
    if c == 0.0 || tau == t {
        return Ok(rho);
    }
    let q = adaptive_simpson(|s| 1.0 / h.truncated_psi(x, s, params).norm_sqr(), tau, t, QuadOptions::default());
    Ok(rho * (1.0 + c * q.value))
}
