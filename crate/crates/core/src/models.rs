//! Steady states of each model, reduced to the spin-1 (ground) block.

use crate::effective::EffectiveModel;
use crate::error::{Error, Result};
use crate::ideal::{ideal_spin_model, IdealSpinModel};
use crate::observables::{ground_block, husimi_max, husimi_q, sync_measure};
use crate::operator::{ComplexOperator, Superoperator};
use crate::perturbative::{
    perturbative_steady_effective, perturbative_steady_full, split_effective_model,
    split_full_model,
};
use crate::rb87::{full_master_equation, DriveConfig, PhysicalConstants};
use crate::steady::{steady_state, SteadyStateResult};

#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    /// 3×3 spin-1 density matrix; for the 6-level model the ground block
    /// renormalized to unit trace.
    pub rho: ComplexOperator,
    pub unique: bool,
    /// Only for exact solves.
    pub null_multiplicity: Option<usize>,
    pub residual: Option<f64>,
}

impl SpinState {
    fn exact(s: SteadyStateResult, spin: ComplexOperator) -> Self {
        Self {
            rho: spin,
            unique: s.unique,
            null_multiplicity: Some(s.null_multiplicity),
            residual: Some(s.relative_residual()),
        }
    }

    fn perturbative(rho: ComplexOperator) -> Self {
        Self {
            rho,
            unique: true,
            null_multiplicity: None,
            residual: None,
        }
    }

    /// `None` when the steady state is not unique.
    pub fn sq(&self) -> Option<f64> {
        self.unique
            .then(|| sync_measure(&self.rho, 2).expect("spin block is 3×3"))
    }

    /// Azimuth of the Husimi maximum; `None` if not unique or φ-uniform.
    pub fn phi_max(&self, n_theta: usize, n_phi: usize) -> Result<Option<f64>> {
        if !self.unique {
            return Ok(None);
        }
        let field = husimi_q(&self.rho, n_theta, n_phi)?;
        Ok(husimi_max(&field).phi())
    }
}

/// `φ_{+1}` chosen so that `φ_{+1} + φ_{−1} − 2φ_0 = α`.
pub fn with_alpha(drive: &DriveConfig, alpha: f64) -> DriveConfig {
    DriveConfig {
        phi_plus1: alpha - drive.phi_minus1 + 2.0 * drive.phi_0,
        ..*drive
    }
}

pub fn full_exact(drive: &DriveConfig, c: &PhysicalConstants) -> Result<SpinState> {
    let l = full_master_equation(drive, c)?.liouvillian()?;
    let s = steady_state(&l)?;
    let spin = ground_block(s.rho.op(), true)?;
    Ok(SpinState::exact(s, spin))
}

pub fn full_perturbative(
    drive: &DriveConfig,
    c: &PhysicalConstants,
    order: usize,
) -> Result<SpinState> {
    let (l_ref, l_pert) = split_full_model(drive, c)?;
    let sol = perturbative_steady_full(&l_ref, &l_pert, order)?;
    Ok(SpinState::perturbative(ground_block(&sol.sum(), true)?))
}

pub fn effective_liouvillian(drive: &DriveConfig, c: &PhysicalConstants) -> Result<Superoperator> {
    EffectiveModel::from_config(drive, c)?
        .master_equation()
        .liouvillian()
}

pub fn effective_exact(drive: &DriveConfig, c: &PhysicalConstants) -> Result<SpinState> {
    let s = steady_state(&effective_liouvillian(drive, c)?)?;
    let rho = s.rho.op().clone();
    Ok(SpinState::exact(s, rho))
}

pub fn effective_perturbative(
    drive: &DriveConfig,
    c: &PhysicalConstants,
    order: usize,
) -> Result<SpinState> {
    let (reference, pert) = split_effective_model(drive, c)?;
    let sol = perturbative_steady_effective(&reference, &pert, order)?;
    Ok(SpinState::perturbative(sol.sum()))
}

pub fn ideal_exact(model: &IdealSpinModel) -> Result<SpinState> {
    let s = steady_state(&ideal_spin_model(model)?.liouvillian()?)?;
    let rho = s.rho.op().clone();
    Ok(SpinState::exact(s, rho))
}

/// The undriven spin is the reference, the drive the perturbation.
pub fn ideal_perturbative(model: &IdealSpinModel, order: usize) -> Result<SpinState> {
    let full = ideal_spin_model(model)?.liouvillian()?;
    let reference = ideal_spin_model(&IdealSpinModel {
        omega: 0.0,
        ..*model
    })?
    .liouvillian()?;
    let pert = &full - &reference;
    let sol = perturbative_steady_full(&reference, &pert, order)?;
    Ok(SpinState::perturbative(sol.sum()))
}

/// Turns a degenerate perturbative reference into a non-unique marker.
pub fn allow_degenerate(r: Result<SpinState>) -> Result<SpinState> {
    match r {
        Err(Error::NonUniqueSteadyState { multiplicity }) => Ok(SpinState {
            rho: ComplexOperator::zeros(3),
            unique: false,
            null_multiplicity: Some(multiplicity),
            residual: None,
        }),
        other => other,
    }
}
