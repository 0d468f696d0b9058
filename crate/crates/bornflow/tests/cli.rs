// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bornflow::output::RunManifest;
use serde_json::Value;
use tempfile::TempDir;

fn bornflow(args: &[&str], config: Option<&str>, out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bornflow"));
    cmd.args(args).arg("--out").arg(out);
    if let Some(json) = config {
        let path = out.with_extension("json");
        fs::write(&path, json).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().expect("spawn bornflow")
}

fn ok(o: &Output) {
    assert!(o.status.success(), "exit {:?}\nstderr: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap()
}

fn rows(path: PathBuf) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let body = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, body)
}

/// Every output file except the manifest, whose timings vary between runs.
fn data_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn fields_writes_surfaces_and_residuals() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("fields");
    ok(&bornflow(&["fields"], None, &out));
    for name in ["rho_eq", "phase", "velocity", "quantum_potential"] {
        let (header, body) = rows(out.join(format!("{name}.csv")));
        assert_eq!(header, ["t", "x", name, "node"]);
        assert_eq!(body.len(), 201 * 101, "{name}");
    }
    let residuals = json(out.join("residuals.json"));
    assert!(residuals.is_object());
    let manifest = RunManifest::load(&out.join("manifest.json")).unwrap();
    assert_eq!(manifest.outputs.len(), 6);
}

#[test]
fn invalid_length_names_the_field() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("bad");
    let o = bornflow(&["fields"], Some(r#"{"provider": {"name": "box", "length": -1.0, "n1": 1, "n2": 2}}"#), &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("provider.length"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let o = bornflow(&["density"], Some(r#"{"grid": {"n_pts": 10}}"#), &tmp.path().join("bad"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rerun_is_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(&bornflow(&["density", "--threads", "1"], None, &a));
    ok(&bornflow(&["density", "--threads", "3"], None, &b));
    let (da, db) = (data_bytes(&a), data_bytes(&b));
    assert_eq!(da.keys().collect::<Vec<_>>(), ["config.json", "density.csv", "kernel.json", "negativity.json"]);
    assert!(da == db);
    let ma = RunManifest::load(&a.join("manifest.json")).unwrap();
    let mb = RunManifest::load(&b.join("manifest.json")).unwrap();
    assert_eq!(ma.outputs, mb.outputs);
}

#[test]
fn zero_coupling_density_is_equilibrium() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("c0");
    ok(&bornflow(&["density"], Some(r#"{"c": 0.0}"#), &out));
    let (_, body) = rows(out.join("density.csv"));
    assert!(body.iter().all(|r| r[2] == r[3]));
    assert_eq!(json(out.join("negativity.json"))["negative"], false);
}

#[test]
fn stationary_negativity_onset() {
    // ρ = |ψ|² + c·t, so the first crossing is at the smallest off-node |ψ|².
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("neg");
    let cfg = r#"{"provider": {"name": "stationary", "length": 1.0, "n": 1}, "c": -0.5}"#;
    ok(&bornflow(&["density"], Some(cfg), &out));
    let report = json(out.join("negativity.json"));
    assert_eq!(report["negative"], true);
    let earliest = &report["earliest"];
    let x = earliest["x"].as_f64().unwrap();
    assert!((x - 0.01).abs() < 1e-12 || (x - 0.99).abs() < 1e-12, "{x}");
    let expected = 2.0 * (std::f64::consts::PI * 0.01).sin().powi(2) / 0.5;
    let t = earliest["t"].as_f64().unwrap();
    assert!((t - expected).abs() < 1e-12, "{t} vs {expected}");
    assert_eq!(report["first_negative_sample"].as_f64(), Some(0.005));
    assert!(report["skipped_regularized"].as_u64().unwrap() > 0);
}

#[test]
fn exponential_flag_writes_comparison() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("exp");
    ok(&bornflow(&["density", "--exponential"], None, &out));
    let (header, body) = rows(out.join("density_exp.csv"));
    assert_eq!(header, ["t", "x", "rho_exp", "rho", "difference"]);
    assert_eq!(body.len(), 201 * 101);
    let cmp = json(out.join("exp_comparison.json"));
    assert!(cmp["iterations"].as_u64().unwrap() >= 1);
    assert!(cmp["max_abs_difference"].as_f64().unwrap().is_finite());
}

#[test]
fn box_writes_closed_form_surface() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("box");
    ok(&bornflow(&["box"], None, &out));
    let (header, body) = rows(out.join("box.csv"));
    assert_eq!(header, ["t", "x", "rho_eq", "rho", "method"]);
    assert!(!body.is_empty());
    assert!(body.iter().all(|r| r[4] == "closed" || r[4] == "quadrature"));
}

#[test]
fn survival_recovers_lorentzian_rate() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("surv");
    ok(&bornflow(&["survival"], None, &out));
    let fit = json(out.join("fit.json"));
    let gamma = fit["gamma"].as_f64().unwrap();
    assert!((gamma - 2.0).abs() / 2.0 < 0.02, "{gamma}");
    assert_eq!(fit["non_exponential"], false);
}

#[test]
fn coarse_survival_grid_exits_with_convergence_code() {
    let tmp = TempDir::new().unwrap();
    let o = bornflow(&["survival"], Some(r#"{"survival": {"intervals": 200}}"#), &tmp.path().join("coarse"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resolution"));
}

#[test]
fn chsh_scan_stationary_maximum() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("chsh");
    ok(&bornflow(&["chsh-scan"], Some(r#"{"provider": {"name": "stationary", "length": 1.0, "n": 1}}"#), &out));
    let s = json(out.join("chsh_summary.json"));
    // default c = 0.1 and largest δτ = 0.4
    assert!((s["max_lhs"].as_f64().unwrap() - 2.0 * 0.1 * 0.4).abs() < 1e-12);
    assert_eq!(s["points"], 80);
    let (header, body) = rows(out.join("chsh_scan.csv"));
    assert_eq!(header[0], "convention");
    assert_eq!(body.len(), 80);
}

#[test]
fn spectrum_reads_csv_series() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("series.csv");
    let omega = 2.0 * std::f64::consts::PI * 4.0;
    let mut text = String::from("t,rho\n");
    for j in 0..256 {
        let t = j as f64 / 64.0;
        text.push_str(&format!("{t},{}\n", 1.0 + 0.5 * (omega * t).cos()));
    }
    fs::write(&input, text).unwrap();
    let out = tmp.path().join("spec");
    ok(&bornflow(&["spectrum", "--input", input.to_str().unwrap()], None, &out));
    let s = json(out.join("spectrum.json"));
    assert_eq!(s["samples"], 256);
    let peaks: Vec<f64> = s["dominant_omega"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let d_omega = s["d_omega"].as_f64().unwrap();
    // Hann leaks the constant into its neighbours, then come the ±ω lines
    assert_eq!(peaks[0], 0.0);
    for w in &peaks[1..3] {
        assert!((w.abs() - d_omega).abs() < 1e-9);
    }
    assert!((peaks[3] + omega).abs() < 1e-9 && (peaks[4] - omega).abs() < 1e-9);
}

#[test]
fn spectrum_rejects_malformed_csv_with_line() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("bad.csv");
    fs::write(&input, "t,rho\n0,1\n0.1,oops\n").unwrap();
    let o = bornflow(&["spectrum", "--input", input.to_str().unwrap()], None, &tmp.path().join("spec"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn zero_threads_rejected() {
    let tmp = TempDir::new().unwrap();
    let o = bornflow(&["fields", "--threads", "0"], None, &tmp.path().join("t0"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn plots_flag_writes_svg() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("plots");
    ok(&bornflow(&["survival", "--plots"], None, &out));
    let svg = fs::read_to_string(out.join("survival.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn verify_exit_code_matches_table() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("verify");
    let o = bornflow(&["verify"], None, &out);
    let table = String::from_utf8_lossy(&o.stdout);
    let failed = table.lines().filter(|l| l.contains("FAIL")).count();
    assert_eq!(o.status.code(), Some(if failed > 0 { 3 } else { 0 }), "{table}");
    let (_, body) = rows(out.join("verify.csv"));
    assert_eq!(body.len(), bornflow::verify::suite_names().len());
}
