//! Phase synchronization of a spin 1 built from three ground states coupled to
//! lossy auxiliary states.
//!
//! Generators are in rad/µs, time in µs. The pipeline runs from the 6-level
//! Rb-87 model ([`rb87`]) through adiabatic elimination ([`effective`]) to
//! steady states ([`steady`], [`perturbative`], [`closed_form`]) and phase-space
//! observables ([`observables`]). [`oracles`] holds exact time-dependent
//! solutions used to certify the integrator.

pub mod closed_form;
pub mod effective;
pub mod error;
pub mod ideal;
pub mod models;
pub mod observables;
pub mod operator;
pub mod oracles;
pub mod perturbative;
pub mod rb87;
pub mod spin;
pub mod steady;
pub mod tolerance;

pub use closed_form::{closed_form_sq, ClosedForm};
pub use effective::{
    beta_scaled_model, effective_hamiltonian, effective_lindblad_terms, effective_parameters,
    nonhermitian_hamiltonian, partition, BetaApproach, EffectiveModel, EffectiveParameters,
    PartitionedOperators,
};
pub use error::{Error, Result};
pub use ideal::{ideal_spin_model, IdealSpinModel};
pub use models::SpinState;
pub use observables::{
    ground_block, husimi_max, husimi_q, spin_coherent_state, sync_measure, HusimiField,
    PhaseMaximum,
};
pub use operator::{
    devectorize, dissipator_apply, liouvillian, unitary_exp, vectorize, CMatrix, CVector,
    ComplexOperator, DecayPath, DensityMatrix, LindbladTerm, MasterEquation, Rate, Superoperator,
};
pub use oracles::{case_i_solution, case_ii_solution, case_iii_solution, OracleParams};
pub use perturbative::{
    perturbative_steady_effective, perturbative_steady_full, PerturbativeSolution,
};
pub use rb87::{
    build_full_hamiltonian, full_lindblad_terms, mhz, rotating_frame_energies, zeeman_shifts,
    DriveConfig, PhysicalConstants,
};
pub use steady::{evolve, steady_state, SteadyStateResult};
pub use tolerance::Tolerances;
