//! The ideal (and expanded ideal) driven spin 1 with gain and damping.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::operator::{ComplexOperator, LindbladTerm, MasterEquation, IM};
use crate::spin::SpinOperators;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealSpinModel {
    pub delta: f64,
    pub omega: f64,
    pub phi_s: f64,
    pub gamma_g: f64,
    pub gamma_d: f64,
    /// Adds the extra π phase on the `(+1, 0)` coupling.
    pub expanded: bool,
}

/// `L_g = −S₊S_z/√2` (gain, |−1⟩ → |0⟩).
pub fn gain_operator() -> ComplexOperator {
    let s = SpinOperators::spin_one();
    (&s.plus() * &s.z()) * (-FRAC_1_SQRT_2)
}

/// `L_d = S₋S_z/√2` (damping, |+1⟩ → |0⟩).
pub fn damping_operator() -> ComplexOperator {
    let s = SpinOperators::spin_one();
    (&s.minus() * &s.z()) * FRAC_1_SQRT_2
}

pub fn ideal_hamiltonian(m: &IdealSpinModel) -> ComplexOperator {
    let a = m.omega * FRAC_1_SQRT_2;
    let extra = if m.expanded { PI } else { 0.0 };
    let h12 = -IM * a * C64::from_polar(1.0, m.phi_s + extra);
    let h23 = -IM * a * C64::from_polar(1.0, m.phi_s);
    let mut h = ComplexOperator::from_real_diagonal(&[m.delta, 0.0, -m.delta]);
    h[(0, 1)] = h12;
    h[(1, 0)] = h12.conj();
    h[(1, 2)] = h23;
    h[(2, 1)] = h23.conj();
    h
}

/// Hamiltonian plus the gain and damping terms, in that order.
pub fn ideal_spin_model(m: &IdealSpinModel) -> Result<MasterEquation> {
    let terms = vec![
        LindbladTerm::with_rate(gain_operator(), m.gamma_g)?,
        LindbladTerm::with_rate(damping_operator(), m.gamma_d)?,
    ];
    MasterEquation::new(ideal_hamiltonian(m), terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(expanded: bool) -> IdealSpinModel {
        IdealSpinModel {
            delta: 0.0,
            omega: 1.3,
            phi_s: 0.0,
            gamma_g: 1.0,
            gamma_d: 1.0,
            expanded,
        }
    }

    #[test]
    fn plain_coupling() {
        let h = ideal_hamiltonian(&model(false));
        assert!((h[(0, 1)] - (-IM * 1.3 * FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((h[(1, 2)] - (-IM * 1.3 * FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn expanded_coupling_flips_sign() {
        let h = ideal_hamiltonian(&model(true));
        assert!((h[(0, 1)] - IM * 1.3 * FRAC_1_SQRT_2).norm() < 1e-15);
        assert!((h[(1, 2)] - (-IM * 1.3 * FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(h.hermiticity_error(), 0.0);
    }

    #[test]
    fn jump_operators_are_single_transitions() {
        assert!(gain_operator().max_abs_diff(&ComplexOperator::ket_bra(3, 1, 2)) < 1e-15);
        assert!(damping_operator().max_abs_diff(&ComplexOperator::ket_bra(3, 1, 0)) < 1e-15);
    }

    #[test]
    fn negative_rate_rejected() {
        let mut m = model(false);
        m.gamma_d = -1.0;
        assert!(ideal_spin_model(&m).is_err());
    }
}
