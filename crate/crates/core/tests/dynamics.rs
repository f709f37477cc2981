mod common;

use std::f64::consts::PI;

use auxsync_core::oracles::{case_i_solution, case_ii_solution, case_iii_solution, OracleParams};
use auxsync_core::perturbative::{
    perturbative_steady_effective, perturbative_steady_full, split_effective_model,
    split_full_model,
};
use auxsync_core::{
    closed_form_sq, evolve, ground_block, mhz, steady_state, sync_measure, ClosedForm,
    ComplexOperator, DensityMatrix, DriveConfig, EffectiveModel, PhysicalConstants, Superoperator,
};
use common::{assert_close, density};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn grid() -> Vec<f64> {
    (0..20).map(|k| 0.015 * k as f64).collect()
}

fn effective_liouvillian(cfg: &DriveConfig) -> Superoperator {
    EffectiveModel::from_config(cfg, &PhysicalConstants::rb87())
        .unwrap()
        .master_equation()
        .liouvillian()
        .unwrap()
}

fn probe_free(omega_prime: f64, phi_plus1: f64, phi_minus1: f64, db: f64) -> DriveConfig {
    let c = PhysicalConstants::rb87();
    DriveConfig {
        omega_0: 0.0,
        omega_prime,
        phi_plus1,
        phi_minus1,
        ..DriveConfig::standard(0.0)
    }
    .with_delta_b(db, &c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn zero_field_without_decay_beam(rho0 in density(3), pp in -PI..PI, pm in -PI..PI) {
        let c = PhysicalConstants::rb87();
        let cfg = probe_free(0.0, pp, pm, 0.0);
        let p = OracleParams::new(cfg.omega_plus1, 0.0, pm - pp, &c);
        let t = grid();
        let numeric = evolve(&effective_liouvillian(&cfg), &rho0, &t).unwrap();
        for (tk, r) in t.iter().zip(&numeric) {
            let exact = case_i_solution(&rho0, *tk, &p).unwrap();
            prop_assert!(r.max_abs_diff(exact.op()) <= 1e-8, "t = {}", tk);
        }
    }

    #[test]
    fn zero_field_with_decay_beam(rho0 in density(3)) {
        let c = PhysicalConstants::rb87();
        let cfg = probe_free(mhz(3.0), 0.0, 0.0, 0.0);
        let p = OracleParams::new(cfg.omega_plus1, cfg.omega_prime, 0.0, &c);
        let t = grid();
        let numeric = evolve(&effective_liouvillian(&cfg), &rho0, &t).unwrap();
        for (tk, r) in t.iter().zip(&numeric) {
            let exact = case_ii_solution(&rho0, *tk, &p).unwrap();
            prop_assert!((r[(1, 1)].re - exact.rho22).abs() <= 1e-8);
            prop_assert!((r[(0, 2)] - exact.rho13).norm() <= 1e-8);
        }
    }

    #[test]
    fn finite_field_without_controls(rho0 in density(3), db in 0.05..1.0f64) {
        let c = PhysicalConstants::rb87();
        let mut cfg = probe_free(mhz(3.0), 0.0, 0.0, mhz(db));
        cfg.omega_plus1 = 0.0;
        cfg.omega_minus1 = 0.0;
        let p = OracleParams::new(0.0, cfg.omega_prime, 0.0, &c)
            .with_zeeman(cfg.delta_b, cfg.delta_b_prime);
        let t: Vec<f64> = (0..20).map(|k| 0.1 * k as f64).collect();
        let numeric = evolve(&effective_liouvillian(&cfg), &rho0, &t).unwrap();
        for (tk, r) in t.iter().zip(&numeric) {
            let exact = case_iii_solution(&rho0, *tk, &p).unwrap();
            prop_assert!(r.max_abs_diff(exact.op()) <= 1e-8, "t = {}", tk);
        }
    }
}

#[test]
fn zero_field_without_decay_beam_has_degenerate_steady_state() {
    let l = effective_liouvillian(&probe_free(0.0, 0.0, 0.0, 0.0));
    let s = steady_state(&l).unwrap();
    assert!(!s.unique);
    assert!(s.null_multiplicity > 1);
}

#[test]
fn probe_free_reference_is_the_middle_state() {
    let cfg = probe_free(mhz(3.0), 0.0, 0.0, mhz(0.4));
    let s = steady_state(&effective_liouvillian(&cfg)).unwrap();
    assert!(s.unique);
    assert!(s.rho.max_abs_diff(&ComplexOperator::projector(3, 1)) < 1e-10);
}

#[test]
fn steady_state_is_a_fixed_point_of_evolution() {
    let l = effective_liouvillian(&DriveConfig::standard(mhz(0.4)));
    let s = steady_state(&l).unwrap();
    assert!(s.relative_residual() < 1e-9);
    let out = evolve(&l, &s.rho, &[0.0, 2.0]).unwrap();
    assert!(out[1].max_abs_diff(s.rho.op()) < 1e-9);
    assert!(s.rho.min_eigenvalue() > -1e-10);
}

#[test]
fn long_evolution_reaches_steady_state() {
    let l = effective_liouvillian(&DriveConfig::standard(mhz(0.4)));
    let s = steady_state(&l).unwrap();
    let out = evolve(&l, &DensityMatrix::basis_state(3, 0), &[0.0, 60.0]).unwrap();
    assert!(out[1].max_abs_diff(s.rho.op()) < 1e-7);
}

#[test]
fn perturbative_orders_are_traceless_and_hermitian() {
    let c = PhysicalConstants::rb87();
    let (r, p) = split_effective_model(&DriveConfig::standard(mhz(0.4)), &c).unwrap();
    let sol = perturbative_steady_effective(&r, &p, 4).unwrap();
    assert_eq!(sol.orders.len(), 5);
    assert!((sol.orders[0].trace().re - 1.0).abs() < 1e-12);
    for o in &sol.orders[1..] {
        assert!(o.trace().norm() < 1e-10);
        assert!(o.hermiticity_error() < 1e-12);
    }
}

#[test]
fn first_order_effective_matches_closed_form() {
    let c = PhysicalConstants::rb87();
    for db in [0.0, 0.2, 0.4] {
        let cfg = DriveConfig::standard(mhz(db));
        let (r, p) = split_effective_model(&cfg, &c).unwrap();
        let sol = perturbative_steady_effective(&r, &p, 1).unwrap();
        let sq = sync_measure(&sol.sum_to(1), 2).unwrap();
        let params = EffectiveModel::from_config(&cfg, &c)
            .unwrap()
            .params
            .unwrap();
        let exact = closed_form_sq(&params, ClosedForm::FirstOrder);
        assert_close(sq, exact, 1e-8, &format!("ΔB = {db}"));
    }
}

#[test]
fn first_order_point_b_value() {
    let c = PhysicalConstants::rb87();
    let (r, p) = split_effective_model(&DriveConfig::standard(mhz(0.4)), &c).unwrap();
    let sol = perturbative_steady_effective(&r, &p, 1).unwrap();
    assert_close(sync_measure(&sol.sum_to(1), 2).unwrap(), 0.107, 1e-3, "S_q");
}

#[test]
fn first_order_follows_half_angle_cosine() {
    let c = PhysicalConstants::rb87();
    let base = DriveConfig::standard(mhz(0.4));
    let at = |alpha: f64| {
        let cfg = DriveConfig {
            phi_plus1: alpha - base.phi_minus1 + 2.0 * base.phi_0,
            ..base
        };
        let (r, p) = split_effective_model(&cfg, &c).unwrap();
        let sol = perturbative_steady_effective(&r, &p, 1).unwrap();
        sync_measure(&sol.sum_to(1), 2).unwrap()
    };
    let s0 = at(0.0);
    for k in 1..12 {
        let alpha = 2.0 * PI * k as f64 / 12.0;
        assert_close(
            at(alpha),
            s0 * (alpha / 2.0).cos().abs(),
            1e-9,
            &format!("α = {alpha}"),
        );
    }
}

#[test]
fn full_model_first_order_is_close_to_reduced() {
    let c = PhysicalConstants::rb87();
    let cfg = DriveConfig::standard(mhz(0.4));
    let (l_ref, l_pert) = split_full_model(&cfg, &c).unwrap();
    let sol = perturbative_steady_full(&l_ref, &l_pert, 1).unwrap();
    let g = ground_block(&sol.sum_to(1), true).unwrap();
    let sq = sync_measure(&g, 2).unwrap();
    let params = EffectiveModel::from_config(&cfg, &c)
        .unwrap()
        .params
        .unwrap();
    let reduced = closed_form_sq(&params, ClosedForm::FirstOrder);
    assert!((sq - reduced).abs() <= 0.05 * reduced, "{sq} vs {reduced}");
}

#[test]
fn full_model_excited_population_is_small() {
    let c = PhysicalConstants::rb87();
    let me =
        auxsync_core::rb87::full_master_equation(&DriveConfig::standard(mhz(0.4)), &c).unwrap();
    let s = steady_state(&me.liouvillian().unwrap()).unwrap();
    assert!(s.unique);
    let excited: f64 = (3..6).map(|k| s.rho.population(k)).sum();
    assert!(excited < 0.05, "{excited}");
    let g = ground_block(s.rho.op(), true).unwrap();
    assert!((g.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
}
