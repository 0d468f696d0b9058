// Copyright 2026 The Bornflow Authors
// SPDX-License-Identifier: Apache-2.0

use bornflow_core::chsh::*;
use bornflow_core::hydro::{madelung_decompose, quantum_potential};
use bornflow_core::memory::{memory_kernel, provider_kernel, surface_point, KernelPath};
use bornflow_core::spectral::*;
use bornflow_core::systems::{box_noneq_closed, BoxSystem, StationaryState};
use bornflow_core::*;
use proptest::prelude::*;

fn beat(n1: u32, n2: u32) -> BoxSystem {
    BoxSystem::new(1.0, n1, n2, PhysicalParams::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_starts_at_zero_and_grows(x in 0.05f64..0.95, tau in 0.0f64..1.0, d1 in 0.0f64..0.5, d2 in 0.0f64..0.5) {
        let sys = beat(1, 2);
        let path = KernelPath::fixed_point();
        let (k0, _) = provider_kernel(&sys, x, tau, tau, DEFAULT_NODE_FLOOR, path).unwrap();
        prop_assert_eq!(k0, 0.0);
        let (ka, _) = provider_kernel(&sys, x, tau + d1, tau, DEFAULT_NODE_FLOOR, path).unwrap();
        let (kb, _) = provider_kernel(&sys, x, tau + d1 + d2, tau, DEFAULT_NODE_FLOOR, path).unwrap();
        prop_assert!(ka >= 0.0);
        prop_assert!(kb >= ka - 1e-12 * kb.abs());
    }

    #[test]
    fn sampled_kernel_is_monotone(k in 1usize..40) {
        let grid = Grid1D::new(0.0, 1.0, 21).unwrap();
        let times = TimeGrid::new(0.0, 0.01, 60).unwrap();
        let h = FieldHistory::from_provider(&beat(1, 3), grid, times).unwrap();
        let lo = memory_kernel(&h, 0.05, 0.05 + 0.01 * k as f64, DEFAULT_NODE_FLOOR).unwrap();
        let hi = memory_kernel(&h, 0.05, 0.06 + 0.01 * k as f64, DEFAULT_NODE_FLOOR).unwrap();
        for (a, b) in lo.values.iter().zip(&hi.values) {
            prop_assert!(*a >= 0.0 && b >= a);
        }
        let start = memory_kernel(&h, 0.05, 0.05, DEFAULT_NODE_FLOOR).unwrap();
        prop_assert!(start.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn mask_is_exact(rho in proptest::collection::vec(prop_oneof![Just(0.0), 0.0f64..1e-11, 0.0f64..2.0], 8..40),
                     floor in 1e-13f64..1e-3) {
        let grid = Grid1D::new(0.0, 1.0, rho.len()).unwrap();
        match quantum_potential(&grid, &rho, &PhysicalParams::default(), floor) {
            Ok(q) => {
                for (m, r) in q.mask.iter().zip(&rho) {
                    prop_assert_eq!(*m, *r < floor);
                }
                prop_assert!(q.values.iter().all(|v| v.is_finite()));
            }
            Err(e) => {
                let empty = matches!(e, Error::EmptyField { .. });
                prop_assert!(empty);
            }
        }
    }

    #[test]
    fn no_memory_is_equilibrium(x in 0.01f64..0.99, t in 0.0f64..3.0, dtau in 0.0f64..1.0) {
        let sys = beat(1, 2);
        let p = surface_point(&sys, x, t, t - dtau, 0.0, DEFAULT_NODE_FLOOR, KernelPath::fixed_point()).unwrap();
        prop_assert_eq!(p.density, sys.density(x, t));
        prop_assert_eq!(p.equilibrium, sys.density(x, t));
    }

    #[test]
    fn zero_window_is_exact(x in 0.01f64..0.99, t in 0.0f64..3.0, c in -1.0f64..1.0) {
        let sys = beat(2, 3);
        let d = windowed_density(&sys, x, t, 0.0, c, &ChshOptions::default()).unwrap();
        prop_assert_eq!(d, sys.density(x, t));
    }

    #[test]
    fn chsh_records_reproduce(t in 0.2f64..2.0, tp in 0.0f64..2.0, dtau in 0.0f64..0.2, gap in 0.01f64..0.3, c in -0.5f64..0.5) {
        let sys = beat(1, 2);
        let conv = ChshConvention { tag: ConventionTag::C1, x0: 0.3, t_ref: 0.0 };
        let p = ChshParams { t, t_prime: tp, delta_tau: dtau, delta_tau_prime: dtau + gap, c };
        let a = chsh_lhs(&sys, &conv, p, &ChshOptions::default()).unwrap();
        let b = chsh_lhs(&sys, &conv, p, &ChshOptions::default()).unwrap();
        prop_assert_eq!(a.lhs.to_bits(), b.lhs.to_bits());
    }

    #[test]
    fn stationary_chsh_is_two_c_delta_tau(x in 0.05f64..0.95, t in 0.5f64..3.0, tp in 0.0f64..3.0,
                                          dtau in 0.0f64..0.5, gap in 0.01f64..0.5, c in -0.3f64..0.3) {
        let sys = StationaryState::new(1, 1.0, PhysicalParams::default()).unwrap();
        let conv = ChshConvention { tag: ConventionTag::C1, x0: x, t_ref: 0.0 };
        let p = ChshParams { t, t_prime: tp, delta_tau: dtau, delta_tau_prime: dtau + gap, c };
        let r = chsh_lhs(&sys, &conv, p, &ChshOptions::default()).unwrap();
        prop_assert!((r.lhs - 2.0 * c * dtau).abs() < 1e-10);
    }

    #[test]
    fn closed_form_matches_quadrature(x in 0.02f64..0.98, t in 0.0f64..4.0, dtau in 0.0f64..1.5, c in -0.5f64..0.5) {
        let sys = beat(1, 2);
        let s1 = (std::f64::consts::PI * x).sin();
        let s2 = (2.0 * std::f64::consts::PI * x).sin();
        prop_assume!((s1 * s1 - s2 * s2).abs() > 1e-3);
        prop_assume!(t >= dtau);
        let closed = box_noneq_closed(&sys, x, t, dtau, c).unwrap();
        let quad = surface_point(&sys, x, t, t - dtau, c, DEFAULT_NODE_FLOOR, KernelPath::fixed_point()).unwrap().density;
        prop_assert!((closed - quad).abs() < 1e-8 * closed.abs().max(1.0), "{} vs {}", closed, quad);
    }

    #[test]
    fn madelung_reconstructs(t in 0.0f64..2.0, n1 in 1u32..4, dn in 1u32..3) {
        let sys = beat(n1, n1 + dn);
        let grid = Grid1D::new(0.0, 1.0, 101).unwrap();
        let psi = ComplexField::sample(grid, t, |x| sys.psi(x, t)).unwrap();
        let params = PhysicalParams::default();
        let slice = madelung_decompose(&psi, &params, DEFAULT_NODE_FLOOR).unwrap();
        let back = slice.reconstruct(&params);
        for ((z, w), m) in back.iter().zip(psi.values()).zip(&slice.node_mask) {
            if !m {
                prop_assert!((z - w).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dft_is_linear(a in proptest::collection::vec(-2.0f64..2.0, 32), b in proptest::collection::vec(-2.0f64..2.0, 32),
                     alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let t: Vec<f64> = (0..32).map(|j| 0.1 * j as f64).collect();
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect();
        let sa = density_spectrum(&t, &a, Window::Rectangular).unwrap();
        let sb = density_spectrum(&t, &b, Window::Rectangular).unwrap();
        let sm = density_spectrum(&t, &mix, Window::Rectangular).unwrap();
        for k in 0..32 {
            let lin = sa.rho_hat[k] * alpha + sb.rho_hat[k] * beta;
            prop_assert!((sm.rho_hat[k] - lin).norm() < 1e-12);
        }
    }

    #[test]
    fn dft_preserves_energy(v in proptest::collection::vec(-5.0f64..5.0, 16..64), dt in 0.01f64..1.0) {
        let t: Vec<f64> = (0..v.len()).map(|j| 1.0 + dt * j as f64).collect();
        let s = density_spectrum(&t, &v, Window::Rectangular).unwrap();
        let lhs: f64 = s.rho_hat.iter().map(|z| z.norm_sqr()).sum();
        let rhs = v.len() as f64 * dt * dt * v.iter().map(|x| x * x).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300));
    }

    #[test]
    fn principal_value_reflection(w0 in -1.0f64..1.0, mu in -1.0f64..1.0, slope in -1.0f64..1.0, half in 1.0f64..4.0) {
        let g = move |w: f64| (-(w - mu).powi(2)).exp() * (1.0 + slope * w);
        let (a, b) = (w0 - half, w0 + 1.3 * half);
        let p = principal_value(g, w0, (a, b), PvOptions::default()).unwrap().value;
        let q = principal_value(|w| g(2.0 * w0 - w), w0, (2.0 * w0 - b, 2.0 * w0 - a), PvOptions::default()).unwrap().value;
        prop_assert!((p + q).abs() < 1e-9 * p.abs().max(1.0), "{} vs {}", p, q);
    }
}
