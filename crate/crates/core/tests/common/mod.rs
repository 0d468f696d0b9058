// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

/// Successive ratios `e[k]/e[k+1]`.
pub fn ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

/// Asserts every successive ratio lies in `[lo, hi]`.
pub fn assert_ratios(label: &str, errors: &[f64], lo: f64, hi: f64) {
    for r in ratios(errors) {
        assert!(r >= lo && r <= hi, "{label}: errors {errors:?} give ratio {r}");
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
