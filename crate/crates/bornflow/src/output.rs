// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Output directory, CSV/JSON encoding and the run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILE: &str = "config.json";

/// Round-trip exact decimal form of a double: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn flag(b: bool) -> String {
    (if b { "1" } else { "0" }).to_string()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// CSV text with a header row.
pub fn csv_text<R, I>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    R: IntoIterator<Item = String>,
    I: IntoIterator<Item = R>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let bad = |e: csv::Error| CliError::Config(format!("csv encoding: {e}"));
    w.write_record(header).map_err(bad)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<String>>()).map_err(bad)?;
    }
    w.into_inner().map_err(|e| CliError::Config(format!("csv encoding: {e}")))
}

pub fn json_text(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Config(format!("json encoding: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything needed to reproduce an output directory. Timings vary between
/// runs; every other field is a function of the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub outputs: Vec<FileRecord>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input { path: path.into(), message: e.to_string() })
    }
}

/// Collects written files. Writing is sequential.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    records: Vec<FileRecord>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutputDir { root: root.to_path_buf(), records: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.records.retain(|r| r.path != name);
        self.records.push(FileRecord { path: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
        Ok(())
    }

    pub fn write_csv<R, I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        R: IntoIterator<Item = String>,
        I: IntoIterator<Item = R>,
    {
        let bytes = csv_text(header, rows)?;
        self.write(name, &bytes)
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let bytes = json_text(value)?;
        self.write(name, &bytes)
    }

    pub fn records(&self) -> &[FileRecord] {
        &self.records
    }

    /// Writes the resolved configuration and the manifest.
    pub fn finish(
        mut self,
        command: &str,
        config: &RunConfig,
        timings_ms: BTreeMap<String, f64>,
    ) -> Result<RunManifest> {
        self.write_json(CONFIG_FILE, config)?;
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
            outputs: self.records.clone(),
            timings_ms,
        };
        let bytes = json_text(&manifest)?;
        let path = self.root.join(MANIFEST_FILE);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        Ok(manifest)
    }
}
