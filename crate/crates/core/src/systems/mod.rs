// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Wavefunction providers with known dynamics.
//!
//! * [`BoxSystem`]: two-mode superposition in an infinite well, with the
//!   closed-form memory-kernel density [`box_noneq_closed`].
//! * [`StationaryState`]: a single well eigenstate.
//! * [`GaussianPacket`]: a freely spreading Gaussian, node-free everywhere.
//! * [`evolve_numeric`]: Crank–Nicolson propagation for cross-checks.
//! * [`dyson_density`]: the memory-kernel density of a first-order truncated
//!   Dyson state.

mod box_system;
mod dyson;
mod evolver;
mod gaussian;

pub use box_system::{
    box_equilibrium_density, box_noneq_closed, box_psi, stationary_psi, BoxSystem, StationaryState,
    DEFAULT_POLE_TOLERANCE,
};
pub use dyson::{dyson_density, HamiltonianSpec};
pub use evolver::evolve_numeric;
pub use gaussian::{gaussian_psi, GaussianPacket};

/// `ω_n = n²π²ħ/(2mL²)`.
pub fn box_eigenfrequency(n: u32, length: f64, params: &crate::PhysicalParams) -> f64 {
    let k = n as f64 * crate::math::PI / length;
    params.hbar * k * k / (2.0 * params.mass)
}
