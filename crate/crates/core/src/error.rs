// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty field: no point lies above the node floor {node_floor:e}")]
    EmptyField { node_floor: f64 },

    #[error("negative density {value:e} at grid index {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("history covers [{start}, {end}] but [{tau}, {t}] was requested")]
    Coverage { tau: f64, t: f64, start: f64, end: f64 },

    #[error("x = {x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error(
        "corrected denominator {denominator:e} is below {tolerance:e} at x = {x}; \
         evaluate this point with the quadrature path"
    )]
    PoleProximity { x: f64, denominator: f64, tolerance: f64 },

    #[error("{what} did not converge after {iterations} iterations (last change {residual:e})")]
    NoConvergence { what: &'static str, iterations: usize, residual: f64 },

    #[error("norm drift {drift:e} exceeds {limit:e} at step {step}")]
    NormDrift { step: usize, drift: f64, limit: f64 },

    #[error("small-parameter check failed: max|E|·t/ħ = {value} (must be < 1)")]
    SmallParameter { value: f64 },

    #[error("time grid is not uniform at sample {index}")]
    NonUniformGrid { index: usize },

    #[error("frequency resolution too coarse: halving the step changes p by {change:e} > {tolerance:e}")]
    Resolution { change: f64, tolerance: f64 },

    #[error("survival probability {value:e} is not positive at t = {t}")]
    NonPositive { t: f64, value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for failures of an iterative or adaptive numerical procedure, as
    /// opposed to invalid input.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::NormDrift { .. } | Error::Resolution { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;
