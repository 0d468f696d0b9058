// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Float intrinsics for `no_std` builds.

pub(crate) use libm::{atan2, cos, exp, floor, log, log1p, round, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;

#[inline]
pub(crate) fn sq(x: f64) -> f64 {
    x * x
}

/// Wraps an angle into `(-π, π]`.
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut w = a - two_pi * round(a / two_pi);
    if w <= -PI {
        w += two_pi;
    } else if w > PI {
        w -= two_pi;
    }
    w
}
