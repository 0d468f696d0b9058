// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Temporal CHSH-type combination of windowed densities.
//!
//! With `ρ(t, δτ)` the memory-kernel density at `x0` for the window
//! `[t − δτ, t]`, the combination is evaluated term by term as
//!
//! ```text
//! lhs = ρ(t,δτ) − ρ(t,δτ') + ρ(t',δτ) + ρ(t,δτ') − ρ(t') − ρ(δτ)
//! ```
//!
//! The second and fourth terms cancel algebraically; they are still evaluated
//! and summed in this order. The single-argument terms need a convention:
//!
//! * [`ConventionTag::C1`]: `ρ(t') = |Ψ(x0,t')|²` and `ρ(δτ) = |Ψ(x0,δτ)|²`.
//! * [`ConventionTag::C2`]: `ρ(t') = |Ψ(x0,t')|²` and `ρ(δτ) = ρ(t_ref, δτ)`.
//!
//! For a stationary state under C1, `lhs = 2c·δτ`.

use alloc::format;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::memory::{surface_point, KernelPath};
use crate::quad::{composite_simpson, QuadOptions};
use crate::{Error, Result, WaveFunction};

/// Default margin above which `lhs` counts as a violation.
pub const VIOLATION_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConventionTag {
    #[default]
    C1,
    C2,
}

impl ConventionTag {
    pub fn name(self) -> &'static str {
        match self {
            ConventionTag::C1 => "C1",
            ConventionTag::C2 => "C2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshConvention {
    pub tag: ConventionTag,
    pub x0: f64,
    /// Reference time of the windowed `ρ(δτ)` term under C2.
    pub t_ref: f64,
}

/// Point density or density integrated over `[x0 − w, x0 + w]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Detector {
    #[default]
    Point,
    Window {
        half_width: f64,
        panels: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshOptions {
    pub node_floor: f64,
    pub detector: Detector,
    pub margin: f64,
    pub quad: QuadOptions,
}

impl Default for ChshOptions {
    fn default() -> Self {
        ChshOptions {
            node_floor: crate::DEFAULT_NODE_FLOOR,
            detector: Detector::Point,
            margin: VIOLATION_MARGIN,
            quad: QuadOptions::default(),
        }
    }
}

/// One parameter tuple `(t, t', δτ, δτ', c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshParams {
    pub t: f64,
    pub t_prime: f64,
    pub delta_tau: f64,
    pub delta_tau_prime: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshRecord {
    pub params: ChshParams,
    pub lhs: f64,
    pub violated: bool,
    pub convention: ChshConvention,
}

fn point_density<W: WaveFunction + ?Sized>(
    w: &W,
    x: f64,
    t: f64,
    delta_tau: f64,
    c: f64,
    opts: &ChshOptions,
) -> Result<f64> {
    if delta_tau == 0.0 {
        return Ok(w.density(x, t));
    }
    Ok(surface_point(w, x, t, t - delta_tau, c, opts.node_floor, KernelPath::FixedPoint(opts.quad))?.density)
}

fn detect<W: WaveFunction + ?Sized>(w: &W, x0: f64, opts: &ChshOptions, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    match opts.detector {
        Detector::Point => {
            w.check_domain(x0)?;
            f(x0)
        }
        Detector::Window { half_width, panels } => {
            if !(half_width > 0.0) || panels == 0 {
                return Err(Error::invalid("detector", "need half_width > 0 and panels ≥ 1"));
            }
            w.check_domain(x0 - half_width)?;
            w.check_domain(x0 + half_width)?;
            let err = Cell::new(None);
            let v = composite_simpson(
                |x| match f(x) {
                    Ok(v) => v,
                    Err(e) => {
                        let first = err.take();
                        err.set(first.or(Some(e)));
                        0.0
                    }
                },
                x0 - half_width,
                x0 + half_width,
                panels,
            );
            match err.into_inner() {
                Some(e) => Err(e),
                None => Ok(v),
            }
        }
    }
}

/// Density at `x0` (or over the detector) for the window `[t − δτ, t]`.
/// `δτ = 0` gives `|Ψ|²` exactly.
pub fn windowed_density<W: WaveFunction + ?Sized>(
    w: &W,
    x0: f64,
    t: f64,
    delta_tau: f64,
    c: f64,
    opts: &ChshOptions,
) -> Result<f64> {
    if !(delta_tau >= 0.0 && delta_tau.is_finite()) {
        return Err(Error::invalid("delta_tau", "must be finite and ≥ 0"));
    }
    detect(w, x0, opts, |x| point_density(w, x, t, delta_tau, c, opts))
}

fn equilibrium<W: WaveFunction + ?Sized>(w: &W, x0: f64, t: f64, opts: &ChshOptions) -> Result<f64> {
    detect(w, x0, opts, |x| Ok(w.density(x, t)))
}

/// Evaluates the combination for one parameter tuple.
pub fn chsh_lhs<W: WaveFunction + ?Sized>(
    w: &W,
    conv: &ChshConvention,
    p: ChshParams,
    opts: &ChshOptions,
) -> Result<ChshRecord> {
    if !(p.delta_tau >= 0.0 && p.delta_tau_prime > p.delta_tau) {
        return Err(Error::Precondition(format!(
            "need delta_tau' > delta_tau ≥ 0, got {} and {}",
            p.delta_tau_prime, p.delta_tau
        )));
    }
    let x0 = conv.x0;
    let a = windowed_density(w, x0, p.t, p.delta_tau, p.c, opts)?;
    let b = windowed_density(w, x0, p.t, p.delta_tau_prime, p.c, opts)?;
    let c3 = windowed_density(w, x0, p.t_prime, p.delta_tau, p.c, opts)?;
    let d = equilibrium(w, x0, p.t_prime, opts)?;
    let e = match conv.tag {
        ConventionTag::C1 => equilibrium(w, x0, p.delta_tau, opts)?,
        ConventionTag::C2 => windowed_density(w, x0, conv.t_ref, p.delta_tau, p.c, opts)?,
    };
    let lhs = a - b + c3 + b - d - e;
    Ok(ChshRecord { params: p, lhs, violated: lhs > opts.margin, convention: *conv })
}

/// Values scanned along each axis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanRanges {
    pub t: Vec<f64>,
    pub t_prime: Vec<f64>,
    pub delta_tau: Vec<f64>,
    pub delta_tau_prime: Vec<f64>,
    pub c: Vec<f64>,
}

/// Evenly spaced values `start, start + stride, …` up to `stop` (inclusive
/// within `1e-9·stride`).
pub fn stride_values(start: f64, stop: f64, stride: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite()) || stop < start {
        return Err(Error::invalid("range", "need finite start ≤ stop"));
    }
    if start == stop {
        return Ok(Vec::from([start]));
    }
    if !(stride > 0.0) {
        return Err(Error::invalid("stride", "must be > 0"));
    }
    let n = crate::math::floor((stop - start) / stride + 1e-9) as usize;
    Ok((0..=n).map(|k| start + k as f64 * stride).collect())
}

/// Admissible tuples (`δτ' > δτ`) in nested order `t, t', δτ, δτ', c`.
pub fn scan_points(r: &ScanRanges) -> Result<Vec<ChshParams>> {
    let mut out = Vec::new();
    for &t in &r.t {
        for &t_prime in &r.t_prime {
            for &delta_tau in &r.delta_tau {
                for &delta_tau_prime in &r.delta_tau_prime {
                    if !(delta_tau >= 0.0 && delta_tau_prime > delta_tau) {
                        continue;
                    }
                    for &c in &r.c {
                        out.push(ChshParams { t, t_prime, delta_tau, delta_tau_prime, c });
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Precondition("scan ranges admit no tuple with delta_tau' > delta_tau ≥ 0".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSummary {
    pub max_lhs: f64,
    pub argmax: ChshParams,
    pub violations: usize,
    pub points: usize,
    pub violation_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Sorted by `lhs` descending; ties keep enumeration order.
    pub records: Vec<ChshRecord>,
    pub summary: ScanSummary,
}

impl ScanResult {
    /// Builds a result from records in enumeration order.
    pub fn from_records(mut records: Vec<ChshRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Precondition("empty scan".into()));
        }
        // stable sort keeps enumeration order among equal lhs
        records.sort_by(|a, b| b.lhs.total_cmp(&a.lhs));
        let violations = records.iter().filter(|r| r.violated).count();
        let points = records.len();
        let summary = ScanSummary {
            max_lhs: records[0].lhs,
            argmax: records[0].params,
            violations,
            points,
            violation_fraction: violations as f64 / points as f64,
        };
        Ok(ScanResult { records, summary })
    }
}

/// Exhaustive scan over `ranges`.
pub fn scan_violations<W: WaveFunction + ?Sized>(
    w: &W,
    conv: &ChshConvention,
    ranges: &ScanRanges,
    opts: &ChshOptions,
) -> Result<ScanResult> {
    let records = scan_points(ranges)?.into_iter().map(|p| chsh_lhs(w, conv, p, opts)).collect::<Result<Vec<_>>>()?;
    ScanResult::from_records(records)
}

/// `lhs` along a shrinking `δτ` sequence, ending with `δτ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitTrace {
    pub delta_tau: Vec<f64>,
    pub lhs: Vec<f64>,
}

impl LimitTrace {
    pub fn endpoint(&self) -> f64 {
        *self.lhs.last().expect("trace ends at delta_tau = 0")
    }

    /// True when `|lhs(δτ) − lhs(0)|` does not increase as `δτ` shrinks
    /// through the samples with `δτ < below`.
    pub fn approaches_monotonically(&self, below: f64) -> bool {
        let end = self.endpoint();
        let gaps: Vec<f64> =
            self.delta_tau.iter().zip(&self.lhs).filter(|(d, _)| **d < below).map(|(_, l)| (l - end).abs()).collect();
        gaps.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Evaluates `lhs` at each `δτ` of a strictly decreasing positive sequence and
/// at `δτ = 0`, holding `t, t', δτ', c` fixed.
#[allow(clippy::too_many_arguments)]
pub fn delta_tau_limit_trace<W: WaveFunction + ?Sized>(
    w: &W,
    conv: &ChshConvention,
    t: f64,
    t_prime: f64,
    delta_tau_prime: f64,
    c: f64,
    sequence: &[f64],
    opts: &ChshOptions,
) -> Result<LimitTrace> {
    if sequence.is_empty() || sequence.windows(2).any(|p| !(p[1] < p[0])) || !(sequence[sequence.len() - 1] > 0.0) {
        return Err(Error::Precondition("delta_tau sequence must be positive and strictly decreasing".into()));
    }
    let mut delta_tau: Vec<f64> = sequence.to_vec();
    delta_tau.push(0.0);
    let lhs = delta_tau
        .iter()
        .map(|&d| chsh_lhs(w, conv, ChshParams { t, t_prime, delta_tau: d, delta_tau_prime, c }, opts).map(|r| r.lhs))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitTrace { delta_tau, lhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::StationaryState;
    use crate::PhysicalParams;

    fn ground() -> StationaryState {
        StationaryState::new(1, 1.0, PhysicalParams::default()).unwrap()
    }

    #[test]
    fn precondition_on_windows() {
        let conv = ChshConvention { tag: ConventionTag::C1, x0: 0.3, t_ref: 0.0 };
        let p = ChshParams { t: 1.0, t_prime: 0.5, delta_tau: 0.4, delta_tau_prime: 0.4, c: 0.1 };
        assert!(matches!(chsh_lhs(&ground(), &conv, p, &ChshOptions::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn x0_outside_box() {
        let conv = ChshConvention { tag: ConventionTag::C1, x0: 1.3, t_ref: 0.0 };
        let p = ChshParams { t: 1.0, t_prime: 0.5, delta_tau: 0.1, delta_tau_prime: 0.4, c: 0.1 };
        assert!(matches!(chsh_lhs(&ground(), &conv, p, &ChshOptions::default()), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn strides_include_stop() {
        assert_eq!(stride_values(0.0, 0.3, 0.1).unwrap().len(), 4);
        assert_eq!(stride_values(0.2, 0.2, 0.0).unwrap(), Vec::from([0.2]));
    }

    #[test]
    fn ties_keep_enumeration_order() {
        let conv = ChshConvention { tag: ConventionTag::C1, x0: 0.3, t_ref: 0.0 };
        let r = ScanRanges {
            t: Vec::from([0.5, 1.0]),
            t_prime: Vec::from([0.2]),
            delta_tau: Vec::from([0.1]),
            delta_tau_prime: Vec::from([0.3]),
            c: Vec::from([0.0]),
        };
        let s = scan_violations(&ground(), &conv, &r, &ChshOptions::default()).unwrap();
        assert_eq!(s.records[0].params.t, 0.5);
        assert_eq!(s.summary.violations, 0);
    }

    #[test]
    fn empty_region() {
        let r = ScanRanges {
            t: Vec::from([0.5]),
            t_prime: Vec::from([0.2]),
            delta_tau: Vec::from([0.3]),
            delta_tau_prime: Vec::from([0.1]),
            c: Vec::from([0.0]),
        };
        assert!(scan_points(&r).is_err());
    }
}
