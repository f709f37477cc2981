mod common;

use std::f64::consts::PI;

use auxsync_core::spin::SpinOperators;
use auxsync_core::{
    husimi_max, husimi_q, mhz, spin_coherent_state, steady_state, sync_measure, unitary_exp,
    ComplexOperator, DriveConfig, EffectiveModel, PhaseMaximum, PhysicalConstants,
};
use common::{assert_close, density};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn effective_steady(cfg: &DriveConfig) -> ComplexOperator {
    let l = EffectiveModel::from_config(cfg, &PhysicalConstants::rb87())
        .unwrap()
        .master_equation()
        .liouvillian()
        .unwrap();
    steady_state(&l).unwrap().rho.into_operator()
}

#[test]
fn coherent_state_matches_closed_form() {
    for &(t, p) in &[(0.3, 1.1), (PI / 2.0, -2.0), (2.9, 3.0)] {
        let v = spin_coherent_state(t, p);
        let expected = [
            C64::from_polar((t / 2.0).cos().powi(2), -p),
            C64::new(t.sin() / 2f64.sqrt(), 0.0),
            C64::from_polar((t / 2.0).sin().powi(2), p),
        ];
        for k in 0..3 {
            assert!((v[k] - expected[k]).norm() < 1e-13);
        }
    }
}

#[test]
fn middle_state_ring() {
    let q = husimi_q(&ComplexOperator::projector(3, 1), 181, 360).unwrap();
    let (i, _) = q.argmax();
    assert_close(q.theta[i], PI / 2.0, 1e-12, "θ");
    let max = q.values[i].iter().copied().fold(f64::MIN, f64::max);
    assert_close(max, 3.0 / (8.0 * PI), 1e-9, "Q max");
    assert_eq!(husimi_max(&q), PhaseMaximum::NoPhasePreference);
}

#[test]
fn refinement_recovers_off_grid_peak() {
    // A localized state rotated to an off-grid azimuth.
    let target = 0.4321;
    let v = spin_coherent_state(PI / 2.0, target);
    let rho = ComplexOperator::outer(&v, &v);
    let mixed = &(rho * 0.3) + &(ComplexOperator::identity(3) * (0.7 / 3.0));
    let q = husimi_q(&mixed, 181, 360).unwrap();
    let m = husimi_max(&q);
    assert!((m.phi().unwrap() - target).abs() < 1e-3, "{m:?}");
    assert!((m.theta().unwrap() - PI / 2.0).abs() < 1e-3);
}

#[test]
fn point_b_peak_position() {
    let rho = effective_steady(&DriveConfig::standard(mhz(0.4)));
    let m = husimi_max(&husimi_q(&rho, 181, 360).unwrap());
    assert!((m.theta().unwrap() - PI / 2.0).abs() <= 0.05, "{m:?}");
    assert!((m.phi().unwrap() - 0.815 * PI).abs() <= 0.02 * PI, "{m:?}");
}

#[test]
fn zero_field_peak_at_antipode() {
    let rho = effective_steady(&DriveConfig::standard(0.0));
    let m = husimi_max(&husimi_q(&rho, 181, 360).unwrap());
    assert!((m.theta().unwrap() - PI / 2.0).abs() <= 0.05, "{m:?}");
    assert!(PI - m.phi().unwrap().abs() <= 0.02 * PI, "{m:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn husimi_is_normalized_and_nonnegative(rho in density(3)) {
        let q = husimi_q(rho.op(), 91, 60).unwrap();
        prop_assert!((q.normalization() - 1.0).abs() <= 1e-6);
        prop_assert!(q.min_value() >= -1e-14);
    }

    #[test]
    fn sync_measure_is_rotation_invariant(rho in density(3), phi in -PI..PI) {
        let u = unitary_exp(&(SpinOperators::spin_one().z() * phi)).unwrap();
        let rotated = &(&u * rho.op()) * &u.adjoint();
        let a = sync_measure(rho.op(), 2).unwrap();
        let b = sync_measure(&rotated, 2).unwrap();
        prop_assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn rotation_shifts_peak(phi in -3.0..3.0f64) {
        let v = spin_coherent_state(1.2, 0.0);
        let rho = ComplexOperator::outer(&v, &v);
        let u = unitary_exp(&(SpinOperators::spin_one().z() * phi)).unwrap();
        let rotated = &(&u * &rho) * &u.adjoint();
        let m = husimi_max(&husimi_q(&rotated, 181, 360).unwrap());
        prop_assert!((m.phi().unwrap() - phi).abs() < 2e-3, "{:?}", m);
    }
}
