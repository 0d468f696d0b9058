// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! One-dimensional quadrature: adaptive Simpson and composite rules.

/// Tolerances for [`adaptive_simpson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth below each initial panel.
    pub max_depth: u32,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
    /// Integrand evaluations allowed before giving up.
    pub max_evaluations: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_depth: 48, initial_panels: 16, max_evaluations: 400_000 }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the local error estimates.
    pub error: f64,
    pub evaluations: usize,
    /// False when the error sum missed the tolerance within the depth and
    /// evaluation limits, or the integrand produced a non-finite value.
    pub converged: bool,
    /// Refinement stopped because bisection no longer reduced the error
    /// estimate while the panel values had already settled: the integrand's
    /// own rounding noise is above the requested tolerance.
    pub roundoff_limited: bool,
}

/// A Simpson panel with its two-half refinement.
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    flm: f64,
    frm: f64,
    left: f64,
    right: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl Panel {
    fn new(
        f: &mut impl FnMut(f64) -> f64,
        (a, b): (f64, f64),
        (fa, fm, fb): (f64, f64, f64),
        whole: f64,
        depth: u32,
    ) -> Self {
        let m = 0.5 * (a + b);
        let flm = f(0.5 * (a + m));
        let frm = f(0.5 * (m + b));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        let err = if delta.is_finite() { delta.abs() / 15.0 } else { f64::INFINITY };
        Panel { a, b, fa, fm, fb, flm, frm, left, right, value: left + right + delta / 15.0, err, depth }
    }

    fn splittable(&self, max_depth: u32) -> bool {
        let m = 0.5 * (self.a + self.b);
        self.err.is_finite() && self.depth < max_depth && m != self.a && m != self.b
    }
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.0.err.total_cmp(&other.0.err).is_eq()
    }
}

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.0.err.total_cmp(&other.0.err)
    }
}

/// Stalled bisections after which [`adaptive_simpson`] gives up on noise.
pub const ROUNDOFF_STALLS: usize = 24;

/// Globally adaptive Simpson quadrature of `f` over `[a, b]` (either
/// orientation).
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate is within `max(abs_tol, rel_tol·Σ|I_panel|)`. The absolute panel
/// sum keeps the relative tolerance meaningful when the pieces cancel.
///
/// A split that leaves the error estimate of a panel (nearly) unchanged while
/// its value moves by less than `1e-5` relative is counted as a roundoff
/// stall; after [`ROUNDOFF_STALLS`] of them refinement stops with
/// `roundoff_limited` set.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error: 0.0, evaluations: 0, converged: true, roundoff_limited: false };
    }
    let n = opts.initial_panels.max(1);
    let width = (b - a) / n as f64;
    let evaluations = core::cell::Cell::new(0);
    let mut eval = |x: f64| {
        evaluations.set(evaluations.get() + 1);
        f(x)
    };
    let mut heap = alloc::collections::BinaryHeap::with_capacity(2 * n);
    let mut done = alloc::vec::Vec::new();
    let mut fa = eval(a);
    for j in 0..n {
        let pa = a + j as f64 * width;
        let pb = if j + 1 == n { b } else { a + (j + 1) as f64 * width };
        let fm = eval(0.5 * (pa + pb));
        let fb = eval(pb);
        let whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        heap.push(ByError(Panel::new(&mut eval, (pa, pb), (fa, fm, fb), whole, 0)));
        fa = fb;
    }
    let totals = |heap: &alloc::collections::BinaryHeap<ByError>, done: &[Panel]| {
        heap.iter()
            .map(|p| &p.0)
            .chain(done)
            .fold((0.0, 0.0, 0.0), |(v, s, e), p| (v + p.value, s + p.value.abs(), e + p.err))
    };
    let (_, mut scale, mut error) = totals(&heap, &done);
    let mut stalls = 0;
    loop {
        if error <= opts.abs_tol.max(opts.rel_tol * scale) {
            // the running sums drift; decide on the exact ones
            (_, scale, error) = totals(&heap, &done);
            if error <= opts.abs_tol.max(opts.rel_tol * scale) {
                break;
            }
        }
        if !error.is_finite() || stalls >= ROUNDOFF_STALLS {
            break;
        }
        let Some(ByError(p)) = heap.pop() else { break };
        if !p.splittable(opts.max_depth) {
            done.push(p);
            continue;
        }
        if evaluations.get() + 4 > opts.max_evaluations {
            heap.push(ByError(p));
            break;
        }
        let m = 0.5 * (p.a + p.b);
        let l = Panel::new(&mut eval, (p.a, m), (p.fa, p.flm, p.fm), p.left, p.depth + 1);
        let r = Panel::new(&mut eval, (m, p.b), (p.fm, p.frm, p.fb), p.right, p.depth + 1);
        let (split, split_err) = (l.value + r.value, l.err + r.err);
        if split_err >= 0.99 * p.err && (split - p.value).abs() <= 1e-5 * split.abs() {
            stalls += 1;
        }
        scale += l.value.abs() + r.value.abs() - p.value.abs();
        error += split_err - p.err;
        heap.push(ByError(l));
        heap.push(ByError(r));
    }
    let (value, scale, error) = totals(&heap, &done);
    let converged = error.is_finite() && error <= opts.abs_tol.max(opts.rel_tol * scale);
    let roundoff_limited = !converged && error.is_finite() && stalls >= ROUNDOFF_STALLS;
    Quadrature { value, error, evaluations: evaluations.get(), converged, roundoff_limited }
}

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid(samples: &[f64], h: f64) -> f64 {
    match samples.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (samples[0] + samples[n - 1]) + samples[1..n - 1].iter().sum::<f64>()),
    }
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + j as f64 * h);
    }
    s * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{exp, sin, sqrt, PI};

    #[test]
    fn simpson_polynomials_and_transcendentals() {
        let q = adaptive_simpson(|x| x * x * x, 0.0, 2.0, QuadOptions::default());
        assert!((q.value - 4.0).abs() < 1e-13 && q.converged);
        let q = adaptive_simpson(sin, 0.0, PI, QuadOptions::default());
        assert!((q.value - 2.0).abs() < 1e-11);
        let q = adaptive_simpson(|x| exp(-x * x), -8.0, 8.0, QuadOptions::default());
        assert!((q.value - sqrt(PI)).abs() < 1e-11);
    }

    #[test]
    fn simpson_reversed_interval() {
        let q = adaptive_simpson(|x| x, 1.0, 0.0, QuadOptions::default());
        assert!((q.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn simpson_sharp_peak() {
        // ∫ dx / (ε² + x²) over [-1, 1] = 2·atan(1/ε)/ε
        let eps = 1e-3;
        let q = adaptive_simpson(|x| 1.0 / (eps * eps + x * x), -1.0, 1.0, QuadOptions::default());
        let exact = 2.0 * libm::atan(1.0 / eps) / eps;
        assert!(((q.value - exact) / exact).abs() < 1e-10, "{} vs {exact}", q.value);
    }

    #[test]
    fn simpson_noise_floor_is_roundoff_limited() {
        // Jitter keeps every local error estimate nonzero, so a zero tolerance is unreachable.
        let noisy = |x: f64| 1.0 + 1e-12 * (((x.to_bits() >> 12) % 7) as f64 - 3.0);
        let opts = QuadOptions { rel_tol: 0.0, abs_tol: 0.0, max_evaluations: 20_000, ..QuadOptions::default() };
        let q = adaptive_simpson(noisy, 0.0, 1.0, opts);
        assert!(!q.converged && q.roundoff_limited && q.evaluations <= 20_000);
        assert!((q.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_stops_at_budget() {
        let opts = QuadOptions { max_evaluations: 200, ..QuadOptions::default() };
        let q = adaptive_simpson(|x: f64| 1.0 / (x * x + 1e-8), -1.0, 1.0, opts);
        assert!(!q.converged && !q.roundoff_limited && q.evaluations <= 200);
    }

    #[test]
    fn simpson_cancelling_integrand_uses_absolute_scale() {
        let q = adaptive_simpson(|x: f64| (3.0 * x).sin(), -1.0, 1.0, QuadOptions::default());
        assert!(q.converged && q.value.abs() < 1e-12);
    }

    #[test]
    fn composite_rules() {
        assert!((trapezoid(&[1.0, 1.0, 1.0], 0.5) - 1.0).abs() < 1e-15);
        assert!((composite_simpson(|x| x * x, 0.0, 3.0, 3) - 9.0).abs() < 1e-12);
    }
}
