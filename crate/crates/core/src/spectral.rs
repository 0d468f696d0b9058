// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Frequency-domain tools: windowed transforms of density series, principal
//! values and the Sokhotski–Plemelj split of `∫g(ω)dω/(ω − ω0 ∓ iε)`, survival
//! probabilities `p(t) = |∫₀^Ω e^{iωt} w(ω) dω|²` and exponential decay fits.
//!
//! Transforms use the `e^{+iωt}` convention and are scaled by the sample
//! spacing, so they approximate `∫ e^{iωt} s(t) dt`. The phase is referenced to
//! the first sample.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{cos, exp, log, sin, PI};
use crate::quad::{adaptive_simpson, QuadOptions};
use crate::{Error, Result};

/// Taper applied before transforming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    /// Periodic Hann (raised cosine) taper.
    Hann,
}

impl Window {
    pub fn name(self) -> &'static str {
        match self {
            Window::Rectangular => "rectangular",
            Window::Hann => "hann",
        }
    }

    fn weight(self, j: usize, n: usize) -> f64 {
        match self {
            Window::Rectangular => 1.0,
            Window::Hann => 0.5 - 0.5 * cos(2.0 * PI * j as f64 / n as f64),
        }
    }
}

/// Discrete transform of a density series.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    /// Ascending and uniform: `ω_k = 2πk/(N·dt)` for `k = −⌊N/2⌋, …, ⌈N/2⌉ − 1`.
    pub omega: Vec<f64>,
    pub rho_hat: Vec<Complex64>,
    pub window: Window,
}

impl SpectralResult {
    pub fn d_omega(&self) -> f64 {
        self.omega[1] - self.omega[0]
    }

    /// Indices of the `count` largest `|ρ̂|`, largest first (ties by index).
    pub fn dominant_bins(&self, count: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.rho_hat.len()).collect();
        idx.sort_by(|&a, &b| self.rho_hat[b].norm().total_cmp(&self.rho_hat[a].norm()).then(a.cmp(&b)));
        idx.truncate(count);
        idx
    }
}

/// Checks that `times` is uniformly spaced and returns the spacing.
pub fn uniform_spacing(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::Precondition("need at least two time samples".into()));
    }
    let dt = times[1] - times[0];
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::NonUniformGrid { index: 1 });
    }
    for j in 1..times.len() {
        let expected = times[0] + j as f64 * dt;
        if (times[j] - expected).abs() > 1e-9 * dt.max(times[j].abs()) {
            return Err(Error::NonUniformGrid { index: j });
        }
    }
    Ok(dt)
}

/// Windowed transform `ρ̂(ω_k) = dt·Σ_j w_j s_j e^{iω_k (t_j − t_0)}`.
pub fn density_spectrum(times: &[f64], values: &[f64], window: Window) -> Result<SpectralResult> {
    if times.len() != values.len() {
        return Err(Error::Shape(format!("{} times for {} values", times.len(), values.len())));
    }
    if values.len() < 16 {
        return Err(Error::Precondition(format!("need at least 16 samples, got {}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("values", "must be finite"));
    }
    let dt = uniform_spacing(times)?;
    let n = values.len();
    let twiddle: Vec<Complex64> = (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect();
    let tapered: Vec<f64> = values.iter().enumerate().map(|(j, v)| v * window.weight(j, n)).collect();
    let half = (n / 2) as i64;
    let mut omega = Vec::with_capacity(n);
    let mut rho_hat = Vec::with_capacity(n);
    for kk in -half..(n as i64 - half) {
        let k = kk.rem_euclid(n as i64) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, s) in tapered.iter().enumerate() {
            acc += twiddle[(k * j) % n] * *s;
        }
        omega.push(2.0 * PI * kk as f64 / (n as f64 * dt));
        rho_hat.push(acc * dt);
    }
    Ok(SpectralResult { omega, rho_hat, window })
}

/// Settings for [`principal_value`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvOptions {
    /// Initial excision radius; clipped to half the distance to the nearer end.
    pub epsilon: f64,
    pub tolerance: f64,
    pub max_halvings: usize,
    pub quad: QuadOptions,
}

impl Default for PvOptions {
    fn default() -> Self {
        PvOptions {
            epsilon: 0.1,
            tolerance: 1e-11,
            max_halvings: 30,
            quad: QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, ..QuadOptions::default() },
        }
    }
}

/// Converged principal value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalValue {
    pub value: f64,
    /// Excision radius of the last level used.
    pub epsilon: f64,
    pub halvings: usize,
    /// Difference between the last two extrapolated values.
    pub change: f64,
}

/// `𝒫∫_a^b g(ω)/(ω − ω0) dω` by symmetric excision of `[ω0 − ε, ω0 + ε]`.
///
/// The excised integral is even-free in `ε` (`E(ε) = 𝒫 − c₁ε − c₃ε³ − …`), so
/// successive halvings are Richardson-extrapolated in odd powers of `ε`.
pub fn principal_value(
    g: impl Fn(f64) -> f64,
    omega0: f64,
    domain: (f64, f64),
    opts: PvOptions,
) -> Result<PrincipalValue> {
    let (a, b) = domain;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid("domain", "need finite a < b"));
    }
    if !(omega0 > a && omega0 < b) {
        return Err(Error::OutOfDomain { x: omega0, lo: a, hi: b });
    }
    if !g(omega0).is_finite() {
        return Err(Error::invalid("g", "must be finite at the pole"));
    }
    if !(opts.epsilon > 0.0 && opts.tolerance > 0.0) {
        return Err(Error::invalid("epsilon", "excision radius and tolerance must be > 0"));
    }
    let f = |w: f64| g(w) / (w - omega0);
    let mut evaluations = 0;
    let mut quad = |lo: f64, hi: f64| -> Result<f64> {
        let q = adaptive_simpson(f, lo, hi, opts.quad);
        evaluations += q.evaluations;
        // w − ω0 loses digits in the innermost annuli; the extrapolation
        // change below is the real convergence test
        if !(q.converged || q.roundoff_limited) {
            return Err(Error::NoConvergence {
                what: "principal value quadrature",
                iterations: evaluations,
                residual: q.error,
            });
        }
        Ok(q.value)
    };
    let mut eps = opts.epsilon.min(0.5 * (omega0 - a)).min(0.5 * (b - omega0));
    // outer parts are shared across levels; only the annuli are new
    let mut outer = quad(a, omega0 - eps)? + quad(omega0 + eps, b)?;
    // table[m] holds the m-th extrapolant of the current level
    let mut prev_row: Vec<f64> = Vec::from([outer]);
    let mut best_prev = outer;
    let mut last_change = f64::INFINITY;
    for level in 1..=opts.max_halvings {
        let half = 0.5 * eps;
        outer += quad(omega0 - eps, omega0 - half)? + quad(omega0 + half, omega0 + eps)?;
        eps = half;
        let mut row = Vec::with_capacity(prev_row.len() + 1);
        row.push(outer);
        for m in 0..prev_row.len().min(3) {
            let p = (1u64 << (2 * m + 1)) as f64;
            row.push((p * row[m] - prev_row[m]) / (p - 1.0));
        }
        let best = *row.last().expect("nonempty row");
        let change = (best - best_prev).abs();
        if level >= 2 && change < opts.tolerance * best.abs().max(1.0) {
            return Ok(PrincipalValue { value: best, epsilon: eps, halvings: level, change });
        }
        best_prev = best;
        last_change = change;
        prev_row = row;
    }
    Err(Error::NoConvergence { what: "principal value", iterations: opts.max_halvings, residual: last_change })
}

/// `∓iε` prescription of the pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoleSign {
    /// `ω − ω0 − iε`, giving `+iπg(ω0)`.
    #[default]
    Retarded,
    /// `ω − ω0 + iε`, giving `−iπg(ω0)`.
    Advanced,
}

impl PoleSign {
    pub fn factor(self) -> f64 {
        match self {
            PoleSign::Retarded => 1.0,
            PoleSign::Advanced => -1.0,
        }
    }
}

/// `g(ω)/(ω − ω0 ∓ iε)` integrated over `domain`.
#[derive(Debug, Clone, Copy)]
pub struct PoleModel<G> {
    pub g: G,
    pub omega0: f64,
    pub domain: (f64, f64),
    pub sign: PoleSign,
    pub options: PvOptions,
}

/// Sokhotski–Plemelj limit `𝒫∫g/(ω − ω0) dω ± iπ g(ω0)`.
pub fn sokhotski_plemelj<G: Fn(f64) -> Complex64>(model: &PoleModel<G>) -> Result<Complex64> {
    let g = &model.g;
    let re = principal_value(|w| g(w).re, model.omega0, model.domain, model.options)?.value;
    let g0 = g(model.omega0);
    let im =
        if g0.im == 0.0 { 0.0 } else { principal_value(|w| g(w).im, model.omega0, model.domain, model.options)?.value };
    let pole = Complex64::new(0.0, PI * model.sign.factor()) * g0;
    Ok(Complex64::new(re, im) + pole)
}

/// A spectral weight sampled uniformly on `[0, Ω_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWeight {
    pub omega_max: f64,
    pub values: Vec<Complex64>,
}

impl SampledWeight {
    /// Samples `w` at `intervals + 1` points; `intervals` must be even so the
    /// weight can be re-integrated at twice the spacing.
    pub fn sample(w: impl Fn(f64) -> Complex64, omega_max: f64, intervals: usize) -> Result<Self> {
        if !(omega_max.is_finite() && omega_max > 0.0) {
            return Err(Error::invalid("omega_max", "must be finite and > 0"));
        }
        if intervals < 2 || intervals % 2 != 0 {
            return Err(Error::invalid("intervals", "must be even and ≥ 2"));
        }
        let h = omega_max / intervals as f64;
        let values: Vec<Complex64> = (0..=intervals).map(|j| w(j as f64 * h)).collect();
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("weight", "must be finite on [0, omega_max]"));
        }
        Ok(SampledWeight { omega_max, values })
    }

    pub fn d_omega(&self) -> f64 {
        self.omega_max / (self.values.len() - 1) as f64
    }

    /// Adds the constant `c·s` at every frequency.
    pub fn with_constant(mut self, c: f64, s: Complex64) -> Self {
        for v in &mut self.values {
            *v += s * c;
        }
        self
    }

    /// Trapezoid `∫₀^Ω e^{iωt} w(ω) dω` using every `stride`-th sample.
    fn amplitude_strided(&self, t: f64, stride: usize) -> Complex64 {
        let h = self.d_omega() * stride as f64;
        let last = self.values.len() - 1;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut j = 0;
        while j <= last {
            let wt = if j == 0 || j == last { 0.5 } else { 1.0 };
            let phase = j as f64 * self.d_omega() * t;
            acc += Complex64::new(cos(phase), sin(phase)) * self.values[j] * wt;
            j += stride;
        }
        acc * h
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.amplitude_strided(t, 1)
    }
}

/// Settings for [`survival_probability`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalOptions {
    /// Divide by `p(0)` so the series starts at 1.
    pub normalize: bool,
    /// Largest allowed change of `p` between spacing `dω` and `2dω`.
    pub resolution_tol: f64,
}

impl Default for SurvivalOptions {
    fn default() -> Self {
        SurvivalOptions { normalize: true, resolution_tol: 1e-6 }
    }
}

/// Survival probability samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalSeries {
    pub times: Vec<f64>,
    pub p: Vec<f64>,
    /// `max_t |p(dω) − p(2dω)|`.
    pub resolution_change: f64,
}

/// `p(t) = |∫₀^Ω e^{iωt} w(ω) dω|²` by the trapezoid rule, checked against the
/// same sum at twice the frequency spacing.
pub fn survival_probability(weight: &SampledWeight, times: &[f64], opts: SurvivalOptions) -> Result<SurvivalSeries> {
    if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("times", "need at least one finite time"));
    }
    let norm = if opts.normalize {
        let a0 = weight.amplitude(0.0).norm_sqr();
        if !(a0 > 0.0) {
            return Err(Error::invalid("weight", "zero total weight cannot be normalised"));
        }
        a0
    } else {
        1.0
    };
    let norm_coarse = if opts.normalize { weight.amplitude_strided(0.0, 2).norm_sqr() } else { 1.0 };
    let mut p = Vec::with_capacity(times.len());
    let mut change: f64 = 0.0;
    for &t in times {
        let fine = weight.amplitude(t).norm_sqr() / norm;
        let coarse = weight.amplitude_strided(t, 2).norm_sqr() / norm_coarse;
        change = change.max((fine - coarse).abs());
        p.push(fine);
    }
    if !(change <= opts.resolution_tol) {
        return Err(Error::Resolution { change, tolerance: opts.resolution_tol });
    }
    Ok(SurvivalSeries { times: times.to_vec(), p, resolution_change: change })
}

/// Least-squares fit of `ln p = ln p₀ − γt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub gamma: f64,
    pub log_intercept: f64,
    /// `max |p/p_fit − 1|` over the window.
    pub deviation: f64,
    pub non_exponential: bool,
    pub points: usize,
}

/// Default threshold above which a decay counts as non-exponential.
pub const NON_EXPONENTIAL_THRESHOLD: f64 = 0.05;

/// Default fit window: every sample after the first 5%.
pub fn default_fit_window(series: &SurvivalSeries) -> (f64, f64) {
    let n = series.times.len();
    let skip = n / 20;
    (series.times[skip.min(n - 1)], series.times[n - 1])
}

/// Fits `p` on samples with `t ∈ [window.0, window.1]`.
pub fn decay_fit(series: &SurvivalSeries, window: (f64, f64), threshold: f64) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = series
        .times
        .iter()
        .zip(&series.p)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, p)| (*t, *p))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Precondition(format!(
            "fit window [{}, {}] holds {} samples",
            window.0,
            window.1,
            pts.len()
        )));
    }
    if let Some(&(t, p)) = pts.iter().find(|(_, p)| !(*p > 0.0)) {
        return Err(Error::NonPositive { t, value: p });
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|(t, _)| t).sum::<f64>() / n;
    let ml = pts.iter().map(|(_, p)| log(*p)).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|(t, _)| (t - mt) * (t - mt)).sum();
    let sxy: f64 = pts.iter().map(|(t, p)| (t - mt) * (log(*p) - ml)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Precondition("fit window needs two distinct times".into()));
    }
    let slope = sxy / sxx;
    let intercept = ml - slope * mt;
    let deviation = pts.iter().map(|(t, p)| (p / exp(intercept + slope * t) - 1.0).abs()).fold(0.0, f64::max);
    Ok(DecayFit {
        gamma: -slope,
        log_intercept: intercept,
        deviation,
        non_exponential: deviation > threshold,
        points: pts.len(),
    })
}

/// Normalised Lorentzian line `(γ/π)/((ω − ω_c)² + γ²)`.
pub fn lorentzian(omega: f64, center: f64, gamma: f64) -> f64 {
    gamma / PI / ((omega - center) * (omega - center) + gamma * gamma)
}

/// Gaussian `A·exp(−(ω − μ)²/(2s²))`.
pub fn gaussian(omega: f64, amplitude: f64, mean: f64, width: f64) -> f64 {
    let u = (omega - mean) / width;
    amplitude * exp(-0.5 * u * u)
}
