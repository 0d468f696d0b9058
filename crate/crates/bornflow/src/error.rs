// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

/// Process exit code for validation and I/O failures.
pub const EXIT_VALIDATION: u8 = 1;
/// Process exit code when a numerical method fails to converge.
pub const EXIT_CONVERGENCE: u8 = 2;
/// Process exit code when `verify` finds a failing suite.
pub const EXIT_VERIFICATION: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid configuration. The message names the offending field.
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] bornflow_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{failed} of {total} verification suites failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn config(field: &str, reason: impl std::fmt::Display) -> Self {
        CliError::Config(format!("{field}: {reason}"))
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_convergence() => EXIT_CONVERGENCE,
            CliError::Verification { .. } => EXIT_VERIFICATION,
            _ => EXIT_VALIDATION,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
