//! The Rb-87 six-level scheme: three F=1 ground states, the F''=0 state and
//! the two stretched F'=1 states.
//!
//! Basis order (zero-based): 0 = |F=1,+1⟩, 1 = |F=1,0⟩, 2 = |F=1,−1⟩,
//! 3 = |F''=0⟩, 4 = |F'=1,+1⟩, 5 = |F'=1,−1⟩.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::operator::{ComplexOperator, DecayPath, LindbladTerm, MasterEquation};

pub const FULL_DIM: usize = 6;
pub const GROUND_DIM: usize = 3;

/// Converts an ordinary frequency in MHz to rad/µs.
pub fn mhz(f: f64) -> f64 {
    TAU * f
}

/// Decay rates and Zeeman coefficients, in rad/µs (per gauss for the latter).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    pub gamma_aux_dprime: f64,
    pub gamma_aux_prime: f64,
    pub zeeman_ground: f64,
    pub zeeman_excited: f64,
}

impl PhysicalConstants {
    pub fn rb87() -> Self {
        Self {
            gamma_aux_dprime: mhz(6.065),
            gamma_aux_prime: mhz(5.746),
            zeeman_ground: mhz(0.70),
            zeeman_excited: mhz(0.23),
        }
    }

    pub fn new(
        gamma_aux_dprime: f64,
        gamma_aux_prime: f64,
        zeeman_ground: f64,
        zeeman_excited: f64,
    ) -> Result<Self> {
        let c = Self {
            gamma_aux_dprime,
            gamma_aux_prime,
            zeeman_ground,
            zeeman_excited,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_aux_dprime", self.gamma_aux_dprime),
            ("gamma_aux_prime", self.gamma_aux_prime),
            ("zeeman_ground", self.zeeman_ground),
            ("zeeman_excited", self.zeeman_excited),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `Δ_B' / Δ_B` implied by the two Zeeman coefficients.
    pub fn zeeman_ratio(&self) -> f64 {
        self.zeeman_excited / self.zeeman_ground
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::rb87()
    }
}

/// `(Δ_B, Δ_B')` for a field of `b_gauss`.
pub fn zeeman_shifts(b_gauss: f64, constants: &PhysicalConstants) -> (f64, f64) {
    (
        constants.zeeman_ground * b_gauss,
        constants.zeeman_excited * b_gauss,
    )
}

/// Laser drives, detunings and Zeeman shifts. Magnitudes and shifts in rad/µs,
/// phases in rad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveConfig {
    pub omega_plus1: f64,
    pub omega_0: f64,
    pub omega_minus1: f64,
    pub omega_prime: f64,
    pub phi_plus1: f64,
    pub phi_0: f64,
    pub phi_minus1: f64,
    pub phi_prime: f64,
    pub delta_b: f64,
    pub delta_b_prime: f64,
    pub delta_pi_dprime: f64,
    pub delta_sigma_dprime: f64,
    pub delta_pi_prime: f64,
    /// Require the conditions under which the reduced model is an ideal spin 1:
    /// equal control magnitudes and zero laser detunings.
    pub ideal_mapping: bool,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            omega_plus1: 0.0,
            omega_0: 0.0,
            omega_minus1: 0.0,
            omega_prime: 0.0,
            phi_plus1: 0.0,
            phi_0: 0.0,
            phi_minus1: 0.0,
            phi_prime: 0.0,
            delta_b: 0.0,
            delta_b_prime: 0.0,
            delta_pi_dprime: 0.0,
            delta_sigma_dprime: 0.0,
            delta_pi_prime: 0.0,
            ideal_mapping: true,
        }
    }
}

impl DriveConfig {
    /// Control 2π×9.5 MHz, probe 2π×1 MHz, repump-like Ω' 2π×3 MHz, all phases
    /// zero, and `Δ_B'` tied to `Δ_B` through the Rb-87 Zeeman ratio.
    pub fn standard(delta_b: f64) -> Self {
        Self {
            omega_plus1: mhz(9.5),
            omega_0: mhz(1.0),
            omega_minus1: mhz(9.5),
            omega_prime: mhz(3.0),
            ..Self::default()
        }
        .with_delta_b(delta_b, &PhysicalConstants::rb87())
    }

    /// Sets `Δ_B` and derives `Δ_B'` from the constants' Zeeman ratio.
    pub fn with_delta_b(mut self, delta_b: f64, constants: &PhysicalConstants) -> Self {
        self.delta_b = delta_b;
        self.delta_b_prime = delta_b * constants.zeeman_ratio();
        self
    }

    pub fn with_field(mut self, b_gauss: f64, constants: &PhysicalConstants) -> Self {
        (self.delta_b, self.delta_b_prime) = zeeman_shifts(b_gauss, constants);
        self
    }

    /// `(φ_{+1} − φ_0) + (φ_{−1} − φ_0)`
    pub fn alpha(&self) -> f64 {
        self.phi_plus1 + self.phi_minus1 - 2.0 * self.phi_0
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_plus1", self.omega_plus1),
            ("omega_0", self.omega_0),
            ("omega_minus1", self.omega_minus1),
            ("omega_prime", self.omega_prime),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!(
                    "{name} must be a non-negative magnitude, got {v}"
                )));
            }
        }
        let rest = [
            self.phi_plus1,
            self.phi_0,
            self.phi_minus1,
            self.phi_prime,
            self.delta_b,
            self.delta_b_prime,
            self.delta_pi_dprime,
            self.delta_sigma_dprime,
            self.delta_pi_prime,
        ];
        if rest.iter().any(|v| !v.is_finite()) {
            return Err(invalid("phases and shifts must be finite"));
        }
        if self.ideal_mapping {
            self.check_ideal_mapping()?;
        }
        Ok(())
    }

    pub(crate) fn check_ideal_mapping(&self) -> Result<()> {
        let scale = self.omega_plus1.max(self.omega_minus1).max(1.0);
        if (self.omega_plus1 - self.omega_minus1).abs() > 1e-12 * scale {
            return Err(invalid(
                "ideal mapping requires equal control magnitudes |Ω+1| = |Ω−1|",
            ));
        }
        if self.delta_pi_dprime != 0.0
            || self.delta_sigma_dprime != 0.0
            || self.delta_pi_prime != 0.0
        {
            return Err(invalid("ideal mapping requires zero laser detunings"));
        }
        Ok(())
    }
}

/// The six rotating-frame diagonal energies `ε_1..ε_6`.
pub fn rotating_frame_energies(cfg: &DriveConfig) -> [f64; 6] {
    let (db, dbp) = (cfg.delta_b, cfg.delta_b_prime);
    let (dpi2, dsig2, dpi1) = (
        cfg.delta_pi_dprime,
        cfg.delta_sigma_dprime,
        cfg.delta_pi_prime,
    );
    [
        -db + dpi2 - dsig2,
        0.0,
        db + dpi2 - dsig2,
        dpi2,
        -dbp - dsig2 + dpi2 + dpi1,
        dbp - dsig2 + dpi2 + dpi1,
    ]
}

fn coupling(magnitude: f64, phase: f64) -> C64 {
    -0.5 * C64::from_polar(magnitude, -phase)
}

/// The 6×6 rotating-wave Hamiltonian.
pub fn build_full_hamiltonian(cfg: &DriveConfig) -> ComplexOperator {
    let eps = rotating_frame_energies(cfg);
    let mut h = ComplexOperator::from_real_diagonal(&eps);
    let upper = [
        (0, 3, coupling(cfg.omega_plus1, cfg.phi_plus1)),
        (1, 3, coupling(cfg.omega_0, cfg.phi_0)),
        (2, 3, coupling(cfg.omega_minus1, cfg.phi_minus1)),
        (0, 4, coupling(cfg.omega_prime, cfg.phi_prime)),
        (2, 5, coupling(cfg.omega_prime, cfg.phi_prime)),
    ];
    for (i, j, z) in upper {
        h[(i, j)] = z;
        h[(j, i)] = z.conj();
    }
    h
}

/// Spontaneous-emission channels `(to, from, rate)`, zero-based.
pub fn decay_channels(constants: &PhysicalConstants) -> [(usize, usize, f64); 7] {
    let g2 = constants.gamma_aux_dprime / 3.0;
    let g1 = constants.gamma_aux_prime / 2.0;
    [
        (0, 3, g2),
        (1, 3, g2),
        (2, 3, g2),
        (0, 4, g1),
        (1, 4, g1),
        (1, 5, g1),
        (2, 5, g1),
    ]
}

/// The seven bare decay terms `|k⟩⟨l|` with explicit branching rates.
pub fn full_lindblad_terms(constants: &PhysicalConstants) -> Vec<LindbladTerm> {
    decay_channels(constants)
        .into_iter()
        .map(|(k, l, rate)| {
            LindbladTerm::with_rate(ComplexOperator::ket_bra(FULL_DIM, k, l), rate)
                .expect("branching rates are positive")
                .with_path(DecayPath {
                    from: Some(l),
                    to: k,
                    via: None,
                })
        })
        .collect()
}

pub fn full_master_equation(
    cfg: &DriveConfig,
    constants: &PhysicalConstants,
) -> Result<MasterEquation> {
    cfg.validate()?;
    constants.validate()?;
    MasterEquation::new(build_full_hamiltonian(cfg), full_lindblad_terms(constants))
}
