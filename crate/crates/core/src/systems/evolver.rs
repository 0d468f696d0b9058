// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::field::{ComplexField, FieldHistory};
use crate::grid::{PhysicalParams, TimeGrid};
use crate::{Error, Result};

/// Largest accepted relative change of `Σ|ψ|²` over a run.
const NORM_DRIFT_LIMIT: f64 = 1e-10;

/// Propagates `psi0` with the Crank–Nicolson (Cayley) scheme
/// `(1 + iΔtH/2ħ)ψ⁺ = (1 − iΔtH/2ħ)ψ` for the three-point Hamiltonian with
/// Dirichlet walls at the grid ends.
///
/// The returned history holds `n_steps + 1` slices starting at `psi0.time`.
/// The boundary values of `psi0` are set to zero.
pub fn evolve_numeric(
    psi0: &ComplexField,
    potential: &[f64],
    dt: f64,
    n_steps: usize,
    params: &PhysicalParams,
) -> Result<FieldHistory> {
    params.validate()?;
    let grid = psi0.grid;
    let n = grid.len();
    if potential.len() != n {
        return Err(Error::Shape(format!("potential has {} values for {} points", potential.len(), n)));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", "must be finite and > 0"));
    }
    let times = TimeGrid::new(psi0.time, dt, n_steps + 1)?;
    let h = grid.spacing();
    let m = n - 2;
    let kinetic = params.hbar * params.hbar / (2.0 * params.mass * h * h);
    let beta = Complex64::new(0.0, dt / (2.0 * params.hbar));
    let off = -beta * kinetic;
    let diag: Vec<Complex64> = (1..n - 1).map(|j| 1.0 + beta * (2.0 * kinetic + potential[j])).collect();
    let rdiag: Vec<Complex64> = (1..n - 1).map(|j| 1.0 - beta * (2.0 * kinetic + potential[j])).collect();

    // Thomas factorisation of the constant left-hand matrix.
    let mut c_prime = vec![Complex64::new(0.0, 0.0); m];
    let mut denom = vec![Complex64::new(0.0, 0.0); m];
    denom[0] = diag[0];
    c_prime[0] = off / denom[0];
    for j in 1..m {
        denom[j] = diag[j] - off * c_prime[j - 1];
        c_prime[j] = off / denom[j];
    }

    let mut psi: Vec<Complex64> = psi0.values().to_vec();
    psi[0] = Complex64::new(0.0, 0.0);
    psi[n - 1] = Complex64::new(0.0, 0.0);
    let norm = |p: &[Complex64]| p.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let norm0 = norm(&psi);
    if norm0 == 0.0 {
        return Err(Error::invalid("psi0", "initial state vanishes"));
    }

    let mut values = Vec::with_capacity(n * (n_steps + 1));
    values.extend_from_slice(&psi);
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for step in 1..=n_steps {
        for j in 0..m {
            let i = j + 1;
            rhs[j] = rdiag[j] * psi[i] - off * (psi[i - 1] + psi[i + 1]);
        }
        rhs[0] /= denom[0];
        for j in 1..m {
            rhs[j] = (rhs[j] - off * rhs[j - 1]) / denom[j];
        }
        for j in (0..m - 1).rev() {
            let next = rhs[j + 1];
            rhs[j] -= c_prime[j] * next;
        }
        psi[1..n - 1].copy_from_slice(&rhs);
        let drift = (norm(&psi) / norm0 - 1.0).abs();
        if !(drift <= NORM_DRIFT_LIMIT) {
            return Err(Error::NormDrift { step, drift, limit: NORM_DRIFT_LIMIT });
        }
        values.extend_from_slice(&psi);
    }
    FieldHistory::new(grid, times, values)
}
