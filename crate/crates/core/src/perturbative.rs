//! Order-by-order steady states around the undriven (`Ω_0 = 0`) limit cycle.
//!
//! With `ρ = Σ λ^k ρ^{(k)}` each order solves
//! `L_ref ρ^{(k)} = −L_1 ρ^{(k−1)} − L_2 ρ^{(k−2)}` under `Tr ρ^{(k)} = δ_{k0}`.
//! For the full model `L_2 = 0`. For the effective model the jump operators
//! themselves pick up first-order pieces `B_i`, so `L_1` carries the cross
//! terms between `A_i` and `B_i` and `L_2 = Σ D[B_i]`.

use crate::effective::EffectiveModel;
use crate::error::{invalid, Error, Result};
use crate::operator::{
    c, devectorize, vectorize, CMatrix, CVector, ComplexOperator, LindbladTerm, MasterEquation,
    Superoperator,
};
use crate::rb87::{full_master_equation, DriveConfig, PhysicalConstants};
use crate::steady::steady_state;

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbativeSolution {
    /// `ρ^{(0)}, ρ^{(1)}, ...`
    pub orders: Vec<ComplexOperator>,
}

impl PerturbativeSolution {
    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    /// `λ = 1` readout truncated at order `k`, normalized to unit trace.
    pub fn sum_to(&self, k: usize) -> ComplexOperator {
        let mut rho = self.orders[0].clone();
        for r in self.orders.iter().take(k + 1).skip(1) {
            rho += r;
        }
        let norm = rho.trace().re;
        rho * (1.0 / norm)
    }

    pub fn sum(&self) -> ComplexOperator {
        self.sum_to(self.max_order())
    }
}

/// Least-squares solve of `[L; vec(I)†] x = [rhs; 0]`.
fn solve_traceless(l_ref: &Superoperator, rhs: &CVector) -> Result<ComplexOperator> {
    let n = l_ref.dim();
    let d = l_ref.hilbert_dim();
    let mut a = CMatrix::zeros(n + 1, n);
    a.view_mut((0, 0), (n, n)).copy_from(l_ref.matrix());
    for i in 0..d {
        a[(n, i * d + i)] = c(1.0);
    }
    let mut b = CVector::zeros(n + 1);
    b.rows_mut(0, n).copy_from(rhs);
    let svd = a.svd(true, true);
    let eps = 1e-13 * svd.singular_values.max();
    let x = svd.solve(&b, eps).map_err(|e| invalid(e.to_string()))?;
    Ok(devectorize(&x)?.hermitian_part())
}

fn recurse(
    l_ref: &Superoperator,
    l_1: &Superoperator,
    l_2: Option<&Superoperator>,
    order: usize,
) -> Result<PerturbativeSolution> {
    if l_1.dim() != l_ref.dim() || l_2.is_some_and(|l| l.dim() != l_ref.dim()) {
        return Err(Error::DimensionMismatch {
            expected: l_ref.dim(),
            actual: l_1.dim(),
        });
    }
    let ss = steady_state(l_ref)?;
    if !ss.unique {
        return Err(Error::NonUniqueSteadyState {
            multiplicity: ss.null_multiplicity,
        });
    }
    let mut orders = vec![ss.rho.into_operator()];
    let l_2 = l_2.filter(|l| !l.is_zero());
    if l_1.is_zero() && l_2.is_none() {
        return Ok(PerturbativeSolution { orders });
    }
    for k in 1..=order {
        let mut rhs = -l_1.apply_vec(&vectorize(&orders[k - 1]));
        if let (Some(l2), true) = (l_2, k >= 2) {
            rhs -= l2.apply_vec(&vectorize(&orders[k - 2]));
        }
        orders.push(solve_traceless(l_ref, &rhs)?);
    }
    Ok(PerturbativeSolution { orders })
}

/// Perturbation series for a generator split as `L = L_ref + L_pert`, with
/// `L_pert` entirely first order.
pub fn perturbative_steady_full(
    l_ref: &Superoperator,
    l_pert: &Superoperator,
    order: usize,
) -> Result<PerturbativeSolution> {
    recurse(l_ref, l_pert, None, order)
}

/// Perturbation series for master equations whose jump operators also depend
/// on the perturbation. `pert` holds `H_pert` and the first-order parts `B_i`
/// of each jump, paired index by index with the reference jumps `A_i`.
pub fn perturbative_steady_effective(
    reference: &MasterEquation,
    pert: &MasterEquation,
    order: usize,
) -> Result<PerturbativeSolution> {
    if reference.terms.len() != pert.terms.len() {
        return Err(invalid(format!(
            "reference has {} jump operators, perturbation has {}",
            reference.terms.len(),
            pert.terms.len()
        )));
    }
    let l_ref = reference.liouvillian()?;
    let d = reference.dim();
    if pert.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: pert.dim(),
        });
    }
    let mut l_1 = if pert.hamiltonian.max_abs() == 0.0 {
        Superoperator::zeros(d)
    } else {
        if !pert
            .hamiltonian
            .is_hermitian(crate::Tolerances::DEFAULT.hermitian)
        {
            return Err(invalid("perturbation Hamiltonian is not Hermitian"));
        }
        Superoperator::hamiltonian_part(&pert.hamiltonian)
    };
    let mut l_2 = Superoperator::zeros(d);
    for (r, p) in reference.terms.iter().zip(&pert.terms) {
        let a = r.amplitude();
        let b = p.amplitude();
        if b.max_abs() == 0.0 {
            continue;
        }
        l_1 += &Superoperator::cross_dissipator(&a, &b);
        l_2 += &Superoperator::dissipator(&LindbladTerm::absorbed(b));
    }
    recurse(&l_ref, &l_1, Some(&l_2), order)
}

fn without_probe(cfg: &DriveConfig) -> DriveConfig {
    DriveConfig {
        omega_0: 0.0,
        ..*cfg
    }
}

/// `(L_ref, L_pert)` for the 6-level model with the probe as perturbation.
pub fn split_full_model(
    cfg: &DriveConfig,
    constants: &PhysicalConstants,
) -> Result<(Superoperator, Superoperator)> {
    let full = full_master_equation(cfg, constants)?.liouvillian()?;
    let reference = full_master_equation(&without_probe(cfg), constants)?.liouvillian()?;
    let pert = &full - &reference;
    Ok((reference, pert))
}

/// Reference and perturbation master equations for the reduced model with
/// the probe as perturbation. Jump operators are rate-absorbed in both.
pub fn split_effective_model(
    cfg: &DriveConfig,
    constants: &PhysicalConstants,
) -> Result<(MasterEquation, MasterEquation)> {
    let full = EffectiveModel::from_config(cfg, constants)?;
    let reference = EffectiveModel::from_config(&without_probe(cfg), constants)?;
    split_models(&reference.master_equation(), &full.master_equation())
}

/// `pert = full − reference`, term by term.
pub fn split_models(
    reference: &MasterEquation,
    full: &MasterEquation,
) -> Result<(MasterEquation, MasterEquation)> {
    if reference.terms.len() != full.terms.len() {
        return Err(invalid("models have different numbers of jump operators"));
    }
    let h_pert = &full.hamiltonian - &reference.hamiltonian;
    let terms = reference
        .terms
        .iter()
        .zip(&full.terms)
        .map(|(r, f)| LindbladTerm::absorbed(&f.amplitude() - &r.amplitude()))
        .collect();
    Ok((reference.clone(), MasterEquation::new(h_pert, terms)?))
}
