// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration. Every field has a default, so an empty JSON object is a
//! valid configuration for every subcommand. Unknown keys are rejected.

use std::path::Path;

use bornflow_core::chsh::{stride_values, ConventionTag, Detector, ScanRanges};
use bornflow_core::spectral::Window;
use bornflow_core::{Grid1D, PhysicalParams, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub physics: PhysicsSpec,
    pub provider: ProviderSpec,
    pub grid: GridSpec,
    pub time: TimeSpec,
    /// Memory coupling constant.
    pub c: f64,
    /// Start of the memory window.
    pub tau: f64,
    pub node_floor: f64,
    pub density: DensitySpec,
    #[serde(rename = "box")]
    pub box_run: BoxRunSpec,
    pub spectrum: SpectrumSpec,
    pub survival: SurvivalSpec,
    pub chsh: ChshSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            physics: PhysicsSpec::default(),
            provider: ProviderSpec::default(),
            grid: GridSpec::default(),
            time: TimeSpec::default(),
            c: 0.1,
            tau: 0.0,
            node_floor: bornflow_core::DEFAULT_NODE_FLOOR,
            density: DensitySpec::default(),
            box_run: BoxRunSpec::default(),
            spectrum: SpectrumSpec::default(),
            survival: SurvivalSpec::default(),
            chsh: ChshSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsSpec {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicsSpec {
    fn default() -> Self {
        PhysicsSpec { hbar: 1.0, mass: 1.0 }
    }
}

/// Wavefunction source, selected by `name`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProviderSpec {
    /// Equal-weight superposition of box modes `n1` and `n2`.
    Box {
        length: f64,
        n1: u32,
        n2: u32,
    },
    Stationary {
        length: f64,
        n: u32,
    },
    Gaussian {
        sigma0: f64,
        k0: f64,
        center: f64,
    },
    /// Crank–Nicolson evolution of a Gaussian packet in `½mω²x²`, with
    /// `substeps` solver steps per output sample.
    Numeric {
        sigma0: f64,
        k0: f64,
        center: f64,
        harmonic_omega: f64,
        substeps: usize,
    },
}

impl Default for ProviderSpec {
    fn default() -> Self {
        ProviderSpec::Box { length: 1.0, n1: 1, n2: 2 }
    }
}

impl ProviderSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProviderSpec::Box { .. } => "box",
            ProviderSpec::Stationary { .. } => "stationary",
            ProviderSpec::Gaussian { .. } => "gaussian",
            ProviderSpec::Numeric { .. } => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { x_min: 0.0, x_max: 1.0, n_points: 101 }
    }
}

/// `steps + 1` samples `t0, t0 + dt, …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSpec {
    pub t0: f64,
    pub dt: f64,
    pub steps: usize,
}

impl Default for TimeSpec {
    fn default() -> Self {
        TimeSpec { t0: 0.0, dt: 0.005, steps: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DensitySpec {
    /// Also evaluate the self-consistent exponential form.
    pub exponential: bool,
    pub max_iter: usize,
    pub fp_tol: f64,
}

impl Default for DensitySpec {
    fn default() -> Self {
        DensitySpec { exponential: false, max_iter: 200, fp_tol: 1e-13 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoxRunSpec {
    /// Window length `t − τ` of the closed-form surface.
    pub delta_tau: f64,
    /// Points with `|s1² − s2²|` below this use quadrature.
    pub pole_tolerance: f64,
}

impl Default for BoxRunSpec {
    fn default() -> Self {
        BoxRunSpec { delta_tau: 0.5, pole_tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WindowName {
    Rectangular,
    #[default]
    Hann,
}

impl From<WindowName> for Window {
    fn from(w: WindowName) -> Self {
        match w {
            WindowName::Rectangular => Window::Rectangular,
            WindowName::Hann => Window::Hann,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSpec {
    /// CSV file with columns `t,rho`. When absent the series is the density
    /// at `x0` computed from the provider.
    pub input: Option<String>,
    pub x0: f64,
    pub window: WindowName,
}

impl Default for SpectrumSpec {
    fn default() -> Self {
        SpectrumSpec { input: None, x0: 0.3, window: WindowName::Hann }
    }
}

/// Spectral weight preset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightSpec {
    Lorentzian { center: f64, gamma: f64 },
    Gaussian { amplitude: f64, center: f64, width: f64 },
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec::Lorentzian { center: 50.0, gamma: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurvivalSpec {
    pub weight: WeightSpec,
    pub omega_max: f64,
    /// Trapezoid intervals on `[0, omega_max]` (even).
    pub intervals: usize,
    pub t_max: f64,
    pub samples: usize,
    /// Constant `c·s` added to the weight; `s = [re, im]`.
    pub correction: f64,
    pub correction_scale: [f64; 2],
    pub normalize: bool,
    pub resolution_tol: f64,
    /// Fit window; defaults to the series with its first 5% dropped.
    pub fit_window: Option<[f64; 2]>,
    pub threshold: f64,
}

impl Default for SurvivalSpec {
    fn default() -> Self {
        SurvivalSpec {
            weight: WeightSpec::default(),
            omega_max: 100.0,
            intervals: 10_000,
            t_max: 3.0,
            samples: 301,
            correction: 0.0,
            correction_scale: [1.0, 0.0],
            normalize: true,
            resolution_tol: 1e-6,
            fit_window: None,
            threshold: bornflow_core::spectral::NON_EXPONENTIAL_THRESHOLD,
        }
    }
}

/// A scan axis: explicit values or an inclusive strided range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, stride: f64 },
}

impl Axis {
    pub fn resolve(&self, field: &str) -> Result<Vec<f64>> {
        let v = match self {
            Axis::Values(v) => v.clone(),
            Axis::Range { start, stop, stride } => {
                stride_values(*start, *stop, *stride).map_err(|e| CliError::config(field, e))?
            }
        };
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::config(field, "need at least one finite value"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ConventionName {
    #[default]
    C1,
    C2,
}

impl From<ConventionName> for ConventionTag {
    fn from(c: ConventionName) -> Self {
        match c {
            ConventionName::C1 => ConventionTag::C1,
            ConventionName::C2 => ConventionTag::C2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChshSpec {
    pub convention: ConventionName,
    pub x0: f64,
    /// Reference time of the windowed single-argument term under C2.
    pub t_ref: f64,
    pub t: Axis,
    pub t_prime: Axis,
    pub delta_tau: Axis,
    pub delta_tau_prime: Axis,
    /// Defaults to the top-level `c`.
    pub c: Option<Axis>,
    /// Integrate over `[x0 − w, x0 + w]` instead of sampling at `x0`.
    pub detector_half_width: Option<f64>,
    pub detector_panels: usize,
    pub margin: f64,
}

impl Default for ChshSpec {
    fn default() -> Self {
        ChshSpec {
            convention: ConventionName::C1,
            x0: 0.3,
            t_ref: 0.0,
            t: Axis::Range { start: 0.5, stop: 2.0, stride: 0.5 },
            t_prime: Axis::Values(vec![0.25, 1.0]),
            delta_tau: Axis::Range { start: 0.0, stop: 0.4, stride: 0.1 },
            delta_tau_prime: Axis::Values(vec![0.5, 0.8]),
            c: None,
            detector_half_width: None,
            detector_panels: 32,
            margin: bornflow_core::chsh::VIOLATION_MARGIN,
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite and > 0, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite, got {v}")))
    }
}

impl RunConfig {
    /// Reads and validates a JSON configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        positive("physics.hbar", self.physics.hbar)?;
        positive("physics.mass", self.physics.mass)?;
        match self.provider {
            ProviderSpec::Box { length, n1, n2 } => {
                positive("provider.length", length)?;
                if n1 == 0 || n2 == 0 || n1 == n2 {
                    return Err(CliError::config("provider.n1", "modes must be distinct and ≥ 1"));
                }
            }
            ProviderSpec::Stationary { length, n } => {
                positive("provider.length", length)?;
                if n == 0 {
                    return Err(CliError::config("provider.n", "must be ≥ 1"));
                }
            }
            ProviderSpec::Gaussian { sigma0, k0, center } => {
                positive("provider.sigma0", sigma0)?;
                finite("provider.k0", k0)?;
                finite("provider.center", center)?;
            }
            ProviderSpec::Numeric { sigma0, k0, center, harmonic_omega, substeps } => {
                positive("provider.sigma0", sigma0)?;
                finite("provider.k0", k0)?;
                finite("provider.center", center)?;
                if !(harmonic_omega.is_finite() && harmonic_omega >= 0.0) {
                    return Err(CliError::config("provider.harmonic_omega", "must be finite and ≥ 0"));
                }
                if substeps == 0 {
                    return Err(CliError::config("provider.substeps", "must be ≥ 1"));
                }
            }
        }
        self.grid()?;
        self.times()?;
        finite("c", self.c)?;
        finite("tau", self.tau)?;
        positive("node_floor", self.node_floor)?;
        if self.density.max_iter == 0 {
            return Err(CliError::config("density.max_iter", "must be ≥ 1"));
        }
        positive("density.fp_tol", self.density.fp_tol)?;
        if !(self.box_run.delta_tau.is_finite() && self.box_run.delta_tau >= 0.0) {
            return Err(CliError::config("box.delta_tau", "must be finite and ≥ 0"));
        }
        if !(self.box_run.pole_tolerance.is_finite() && self.box_run.pole_tolerance >= 0.0) {
            return Err(CliError::config("box.pole_tolerance", "must be finite and ≥ 0"));
        }
        finite("spectrum.x0", self.spectrum.x0)?;
        self.validate_survival()?;
        self.scan_ranges()?;
        self.detector()?;
        finite("chsh.x0", self.chsh.x0)?;
        finite("chsh.t_ref", self.chsh.t_ref)?;
        if !(self.chsh.margin.is_finite() && self.chsh.margin >= 0.0) {
            return Err(CliError::config("chsh.margin", "must be finite and ≥ 0"));
        }
        Ok(())
    }

    fn validate_survival(&self) -> Result<()> {
        let s = &self.survival;
        match s.weight {
            WeightSpec::Lorentzian { center, gamma } => {
                finite("survival.weight.center", center)?;
                positive("survival.weight.gamma", gamma)?;
            }
            WeightSpec::Gaussian { amplitude, center, width } => {
                finite("survival.weight.amplitude", amplitude)?;
                finite("survival.weight.center", center)?;
                positive("survival.weight.width", width)?;
            }
        }
        positive("survival.omega_max", s.omega_max)?;
        if s.intervals < 2 || s.intervals % 2 != 0 {
            return Err(CliError::config("survival.intervals", "must be even and ≥ 2"));
        }
        positive("survival.t_max", s.t_max)?;
        if s.samples < 3 {
            return Err(CliError::config("survival.samples", "must be ≥ 3"));
        }
        finite("survival.correction", s.correction)?;
        finite("survival.correction_scale", s.correction_scale[0])?;
        finite("survival.correction_scale", s.correction_scale[1])?;
        positive("survival.resolution_tol", s.resolution_tol)?;
        positive("survival.threshold", s.threshold)?;
        if let Some([a, b]) = s.fit_window {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(CliError::config("survival.fit_window", "need start < end"));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> PhysicalParams {
        PhysicalParams { hbar: self.physics.hbar, mass: self.physics.mass }
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.grid.x_min, self.grid.x_max, self.grid.n_points).map_err(|e| CliError::config("grid", e))
    }

    pub fn times(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.time.t0, self.time.dt, self.time.steps + 1).map_err(|e| CliError::config("time", e))
    }

    pub fn scan_ranges(&self) -> Result<ScanRanges> {
        let s = &self.chsh;
        Ok(ScanRanges {
            t: s.t.resolve("chsh.t")?,
            t_prime: s.t_prime.resolve("chsh.t_prime")?,
            delta_tau: s.delta_tau.resolve("chsh.delta_tau")?,
            delta_tau_prime: s.delta_tau_prime.resolve("chsh.delta_tau_prime")?,
            c: match &s.c {
                Some(axis) => axis.resolve("chsh.c")?,
                None => vec![self.c],
            },
        })
    }

    pub fn detector(&self) -> Result<Detector> {
        match self.chsh.detector_half_width {
            None => Ok(Detector::Point),
            Some(w) => {
                positive("chsh.detector_half_width", w)?;
                if self.chsh.detector_panels == 0 || self.chsh.detector_panels % 2 != 0 {
                    return Err(CliError::config("chsh.detector_panels", "must be even and ≥ 2"));
                }
                Ok(Detector::Window { half_width: w, panels: self.chsh.detector_panels })
            }
        }
    }
}
