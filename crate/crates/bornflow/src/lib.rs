// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Pipelines, file formats and the verification suite behind the `bornflow`
//! command-line tool.
//!
//! Every pipeline is deterministic: the same configuration produces the same
//! CSV and JSON bytes regardless of `--threads`. Each output directory holds
//! the resolved `config.json` and a `manifest.json` with SHA-256 checksums.

#![deny(unsafe_code)]
#![warn(missing_debug_implementations)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod provider;
pub mod verify;

pub use commands::{run, Command, RunOutcome};
pub use config::RunConfig;
pub use error::{CliError, Result};
