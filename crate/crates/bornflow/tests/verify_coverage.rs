// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Every listed module invariant has a `verify` suite, and no suite is
//! unaccounted for.

use std::collections::BTreeSet;

use bornflow::verify::{suite_names, SUITES};

/// (module, invariant, suite).
const INVARIANTS: &[(&str, &str, &str)] = &[
    ("hydro-core", "continuity residual is second order", "hydro.continuity_order"),
    ("hydro-core", "quantum potential forms agree", "hydro.quantum_potential_forms"),
    ("hydro-core", "second-order residual follows continuity", "hydro.second_order_residual_order"),
    ("hydro-core", "Madelung round trip", "hydro.madelung_roundtrip"),
    ("hydro-core", "exponential check converges", "hydro.exponential_check_convergence"),
    ("memory-density", "equilibrium reduction", "memory.equilibrium_reduction"),
    ("memory-density", "monotone kernel", "memory.kernel_monotone"),
    ("memory-density", "solution property", "memory.solution_property"),
    ("memory-density", "order-c² agreement", "memory.order_c_squared"),
    ("memory-density", "stationary-state identity", "memory.stationary_identity"),
    ("analytic-systems", "closed form matches quadrature", "systems.closed_form_vs_quadrature"),
    ("analytic-systems", "providers pass residual suites", "systems.provider_residuals"),
    ("analytic-systems", "evolver norm drift", "systems.evolver_norm"),
    ("analytic-systems", "Dyson density is second order", "systems.dyson_order"),
    ("spectral", "transform linearity", "spectral.linearity"),
    ("spectral", "principal value reflection", "spectral.pv_reflection"),
    ("spectral", "survival classification", "spectral.survival_classification"),
    ("spectral", "Sokhotski–Plemelj split", "spectral.sokhotski_plemelj"),
    ("temporal-chsh", "zero window is equilibrium", "chsh.zero_window_exact"),
    ("temporal-chsh", "stationary lhs = 2cδτ", "chsh.stationary_lhs"),
    ("temporal-chsh", "scan invariant under workers and chunking", "chsh.scan_invariance"),
    ("temporal-chsh", "records reproducible", "chsh.record_reproducible"),
    ("cli", "deterministic outputs", "cli.deterministic_outputs"),
    ("cli", "manifest reproduces outputs", "cli.manifest_reproduces"),
];

#[test]
fn every_invariant_has_a_suite() {
    let names: BTreeSet<&str> = suite_names().into_iter().collect();
    let missing: Vec<_> = INVARIANTS.iter().filter(|(_, _, s)| !names.contains(s)).collect();
    assert!(missing.is_empty(), "no suite for {missing:?}");
}

#[test]
fn every_suite_maps_to_an_invariant() {
    let listed: BTreeSet<&str> = INVARIANTS.iter().map(|(_, _, s)| *s).collect();
    let extra: Vec<_> = suite_names().into_iter().filter(|s| !listed.contains(s)).collect();
    assert!(extra.is_empty(), "unlisted suites {extra:?}");
    assert_eq!(listed.len(), INVARIANTS.len(), "duplicate suite names in the list");
}

#[test]
fn suites_carry_their_module() {
    for (module, _, suite) in INVARIANTS {
        let s = SUITES.iter().find(|s| s.name == *suite).unwrap();
        assert_eq!(s.module, *module, "{suite}");
    }
}
