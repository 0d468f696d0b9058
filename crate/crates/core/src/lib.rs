// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerical core for non-equilibrium quantum densities.
//!
//! The crate is `no_std` and needs only `alloc`. It provides:
//!
//! * [`hydro`]: Madelung decomposition of sampled wavefunctions and residuals of
//!   the hydrodynamic identities (continuity, Hamilton–Jacobi, equation of
//!   motion, second-order density equation, exponential solution).
//! * [`memory`]: the memory-kernel density `ρ = |Ψ|²(1 + c∫dt'/|Ψ|²)`, its
//!   self-consistent exponential form, and positivity diagnostics.
//! * [`systems`]: closed-form wavefunction providers (box superposition,
//!   eigenstates, free Gaussian packet), the closed-form box density, a
//!   Crank–Nicolson evolver and the first-order Dyson density.
//! * [`spectral`]: windowed transforms, principal values, Sokhotski–Plemelj
//!   splitting, survival probabilities and decay fits.
//! * [`chsh`]: the temporal CHSH-type combination of windowed densities and
//!   parameter scans over it.
//!
//! Everything here is a pure function of its inputs. Parallel drivers and file
//! formats live in the `bornflow` crate.

#![no_std]
#![deny(unsafe_code)]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` guards are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod chsh;
pub mod field;
pub mod grid;
pub mod hydro;
pub mod memory;
pub mod quad;
pub mod spectral;
pub mod stencil;
pub mod systems;

pub use error::{Error, Result};
pub use field::{ComplexField, FieldHistory, RealSeries, WaveFunction};
pub use grid::{Grid1D, PhysicalParams, TimeGrid};
pub use num_complex::Complex64;

/// Default density below which a point counts as a wavefunction node.
pub const DEFAULT_NODE_FLOOR: f64 = 1e-12;
