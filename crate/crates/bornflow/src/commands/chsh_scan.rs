// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use bornflow_core::chsh::{chsh_lhs, scan_points, ChshConvention, ChshOptions, ScanRanges, ScanResult};
use bornflow_core::WaveFunction;
use rayon::prelude::*;
use serde::Serialize;

use super::Context;
use crate::error::Result;
use crate::output::{flag, num};
use crate::plot::Series;
use crate::provider::Provider;

/// [`bornflow_core::chsh::scan_violations`] with the points evaluated on the
/// current rayon pool and collected in enumeration order.
pub fn scan_parallel<W: WaveFunction + Sync + ?Sized>(
    w: &W,
    conv: &ChshConvention,
    ranges: &ScanRanges,
    opts: &ChshOptions,
) -> bornflow_core::Result<ScanResult> {
    let records = scan_points(ranges)?
        .into_par_iter()
        .map(|p| chsh_lhs(w, conv, p, opts))
        .collect::<bornflow_core::Result<Vec<_>>>()?;
    ScanResult::from_records(records)
}

#[derive(Debug, Serialize)]
struct Argmax {
    t: f64,
    t_prime: f64,
    dtau: f64,
    dtau_prime: f64,
    c: f64,
}

#[derive(Debug, Serialize)]
struct ScanSummaryFile {
    convention: &'static str,
    x0: f64,
    points: usize,
    violations: usize,
    violation_fraction: f64,
    max_lhs: f64,
    argmax: Argmax,
}

pub(super) fn run(ctx: &mut Context) -> Result<()> {
    let cfg = ctx.cfg;
    let provider = Provider::from_config(cfg)?;
    let w = provider.require_wave("chsh-scan")?;
    let conv = ChshConvention { tag: cfg.chsh.convention.into(), x0: cfg.chsh.x0, t_ref: cfg.chsh.t_ref };
    let opts = ChshOptions {
        node_floor: cfg.node_floor,
        detector: cfg.detector()?,
        margin: cfg.chsh.margin,
        ..ChshOptions::default()
    };
    let res = scan_parallel(w, &conv, &cfg.scan_ranges()?, &opts)?;

    let tag = conv.tag.name();
    let rows = res.records.iter().map(|r| {
        let p = r.params;
        vec![
            tag.to_string(),
            num(conv.x0),
            num(p.t),
            num(p.t_prime),
            num(p.delta_tau),
            num(p.delta_tau_prime),
            num(p.c),
            num(r.lhs),
            flag(r.violated),
        ]
    });
    ctx.out.write_csv(
        "chsh_scan.csv",
        &["convention", "x0", "t", "t_prime", "dtau", "dtau_prime", "c", "lhs", "violated"],
        rows,
    )?;
    let s = res.summary;
    ctx.out.write_json(
        "chsh_summary.json",
        &ScanSummaryFile {
            convention: tag,
            x0: conv.x0,
            points: s.points,
            violations: s.violations,
            violation_fraction: s.violation_fraction,
            max_lhs: s.max_lhs,
            argmax: Argmax {
                t: s.argmax.t,
                t_prime: s.argmax.t_prime,
                dtau: s.argmax.delta_tau,
                dtau_prime: s.argmax.delta_tau_prime,
                c: s.argmax.c,
            },
        },
    )?;
    let rank: Vec<f64> = (0..res.records.len()).map(|k| k as f64).collect();
    let lhs: Vec<f64> = res.records.iter().map(|r| r.lhs).collect();
    ctx.plot(
        "chsh_scan.svg",
        "CHSH combination, sorted",
        "rank",
        "lhs",
        &[Series { label: "lhs", x: &rank, y: &lhs }],
    )?;
    Ok(())
}
