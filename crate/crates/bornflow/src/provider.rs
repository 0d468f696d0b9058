// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use bornflow_core::systems::{evolve_numeric, BoxSystem, GaussianPacket, StationaryState};
use bornflow_core::{ComplexField, FieldHistory, Grid1D, PhysicalParams, TimeGrid, WaveFunction};
use rayon::prelude::*;

use crate::config::{ProviderSpec, RunConfig};
use crate::error::{CliError, Result};

/// A configured wavefunction source.
#[derive(Debug, Clone)]
pub enum Provider {
    Box(BoxSystem),
    Stationary(StationaryState),
    Gaussian(GaussianPacket),
    Numeric { packet: GaussianPacket, harmonic_omega: f64, substeps: usize, params: PhysicalParams },
}

impl Provider {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let params = cfg.params();
        Ok(match cfg.provider {
            ProviderSpec::Box { length, n1, n2 } => {
                Provider::Box(BoxSystem::new(length, n1, n2, params)?.with_pole_tolerance(cfg.box_run.pole_tolerance)?)
            }
            ProviderSpec::Stationary { length, n } => Provider::Stationary(StationaryState::new(n, length, params)?),
            ProviderSpec::Gaussian { sigma0, k0, center } => {
                Provider::Gaussian(GaussianPacket::new(sigma0, k0, center, params)?)
            }
            ProviderSpec::Numeric { sigma0, k0, center, harmonic_omega, substeps } => Provider::Numeric {
                packet: GaussianPacket::new(sigma0, k0, center, params)?,
                harmonic_omega,
                substeps,
                params,
            },
        })
    }

    /// The analytic wavefunction, if the provider has one.
    pub fn wave(&self) -> Option<&(dyn WaveFunction + Sync)> {
        match self {
            Provider::Box(s) => Some(s),
            Provider::Stationary(s) => Some(s),
            Provider::Gaussian(p) => Some(p),
            Provider::Numeric { .. } => None,
        }
    }

    /// Like [`Provider::wave`], but a configuration error for `numeric`.
    pub fn require_wave(&self, command: &str) -> Result<&(dyn WaveFunction + Sync)> {
        self.wave().ok_or_else(|| {
            CliError::config("provider.name", format!("`{command}` needs an analytic provider, not numeric"))
        })
    }

    pub fn potential(&self, grid: &Grid1D) -> Vec<f64> {
        match self {
            Provider::Numeric { harmonic_omega, params, .. } => {
                grid.points().map(|x| 0.5 * params.mass * harmonic_omega * harmonic_omega * x * x).collect()
            }
            _ => vec![0.0; grid.len()],
        }
    }

    /// Wavefunction samples on `grid × times`.
    pub fn history(&self, grid: Grid1D, times: TimeGrid) -> Result<FieldHistory> {
        match self {
            Provider::Numeric { packet, substeps, params, .. } => {
                let psi0 = ComplexField::sample(grid, times.t0(), |x| packet.psi(x, times.t0()))?;
                let fine = evolve_numeric(
                    &psi0,
                    &self.potential(&grid),
                    times.dt() / *substeps as f64,
                    (times.len() - 1) * substeps,
                    params,
                )?;
                let fields: Vec<ComplexField> = (0..times.len()).map(|k| fine.field(k * substeps)).collect();
                Ok(FieldHistory::from_fields(&fields, times)?)
            }
            _ => {
                let w = self.wave().expect("analytic provider");
                w.check_domain(grid.x_min())?;
                w.check_domain(grid.x_max())?;
                let slices: Vec<ComplexField> = (0..times.len())
                    .into_par_iter()
                    .map(|k| {
                        let t = times.t(k);
                        ComplexField::sample(grid, t, |x| w.psi(x, t))
                    })
                    .collect::<bornflow_core::Result<_>>()?;
                Ok(FieldHistory::from_fields(&slices, times)?)
            }
        }
    }
}
