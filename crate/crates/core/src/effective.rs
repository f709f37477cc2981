//! Adiabatic elimination of the three auxiliary states.
//!
//! The excited manifold enters only through the non-Hermitian propagator
//! `H_NH = H_e − (i/2) Σ L†L`. Projected onto ground state `k` it becomes
//! `H_NH − ε_k`, whose inverse gives both the effective Hamiltonian
//! `H_g − ½ Σ_k [V_− (H_NH − ε_k)⁻¹ V_+ P_k + h.c.]` and the effective jumps
//! `L_eff = Σ_j √Γ L (H_NH − ε_j)⁻¹ V_+ P_j`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::operator::{c, CMatrix, ComplexOperator, DecayPath, LindbladTerm, MasterEquation, IM};
use crate::rb87::{
    build_full_hamiltonian, decay_channels, DriveConfig, PhysicalConstants, FULL_DIM, GROUND_DIM,
};

/// Ground/excited blocks of the 6×6 Hamiltonian.
///
/// `v_plus` maps ground to excited (rows are states 4..6, columns 1..3);
/// `v_minus = v_plus†`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionedOperators {
    pub h_g: ComplexOperator,
    pub h_e: ComplexOperator,
    pub v_plus: ComplexOperator,
    pub v_minus: ComplexOperator,
}

impl PartitionedOperators {
    /// Puts the four blocks back into one 6×6 matrix.
    pub fn reassemble(&self) -> ComplexOperator {
        let g = GROUND_DIM;
        let mut m = CMatrix::zeros(FULL_DIM, FULL_DIM);
        m.view_mut((0, 0), (g, g)).copy_from(self.h_g.matrix());
        m.view_mut((g, g), (g, g)).copy_from(self.h_e.matrix());
        m.view_mut((g, 0), (g, g)).copy_from(self.v_plus.matrix());
        m.view_mut((0, g), (g, g)).copy_from(self.v_minus.matrix());
        ComplexOperator::from_matrix(m).expect("square by construction")
    }
}

pub fn partition(h_full: &ComplexOperator) -> Result<PartitionedOperators> {
    if h_full.dim() != FULL_DIM {
        return Err(Error::DimensionMismatch {
            expected: FULL_DIM,
            actual: h_full.dim(),
        });
    }
    let g = GROUND_DIM;
    let block = |r, c| ComplexOperator::from_matrix(h_full.block(r, c, g, g)).expect("square");
    Ok(PartitionedOperators {
        h_g: block(0, 0),
        h_e: block(g, g),
        v_plus: block(g, 0),
        v_minus: block(0, g),
    })
}

fn total_excited_rates(constants: &PhysicalConstants) -> [f64; 3] {
    [
        constants.gamma_aux_dprime,
        constants.gamma_aux_prime,
        constants.gamma_aux_prime,
    ]
}

/// `H_e − (i/2) diag(Γ'', Γ', Γ')` on the excited block.
pub fn nonhermitian_hamiltonian(
    parts: &PartitionedOperators,
    constants: &PhysicalConstants,
) -> ComplexOperator {
    let mut h = parts.h_e.clone();
    for (i, g) in total_excited_rates(constants).into_iter().enumerate() {
        h[(i, i)] -= 0.5 * IM * g;
    }
    h
}

fn off_diagonal_max(op: &ComplexOperator) -> f64 {
    let n = op.dim();
    let mut m = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m = m.max(op[(i, j)].norm());
            }
        }
    }
    m
}

fn require_diagonal(op: &ComplexOperator, what: &str) -> Result<()> {
    if off_diagonal_max(op) > 1e-12 * op.max_abs().max(1.0) {
        return Err(invalid(format!(
            "{what} must be diagonal in the working basis"
        )));
    }
    Ok(())
}

/// `(H_NH − ε_k)⁻¹` for each ground energy `ε_k`.
fn projected_inverses(
    parts: &PartitionedOperators,
    constants: &PhysicalConstants,
) -> Result<Vec<CMatrix>> {
    require_diagonal(&parts.h_g, "ground Hamiltonian block")?;
    let h_nh = nonhermitian_hamiltonian(parts, constants);
    (0..GROUND_DIM)
        .map(|k| {
            let eps = parts.h_g[(k, k)];
            let m = h_nh.matrix() - CMatrix::identity(GROUND_DIM, GROUND_DIM) * eps;
            let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let inv = m
                .lu()
                .try_inverse()
                .ok_or(Error::NumericalSingularity { k })?;
            let inv_scale = inv.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let finite = inv.iter().all(|z| z.re.is_finite() && z.im.is_finite());
            if !finite || scale * inv_scale > 1e14 {
                return Err(Error::NumericalSingularity { k });
            }
            Ok(inv)
        })
        .collect()
}

pub fn effective_hamiltonian(
    parts: &PartitionedOperators,
    constants: &PhysicalConstants,
) -> Result<ComplexOperator> {
    constants.validate()?;
    let inverses = projected_inverses(parts, constants)?;
    let v_plus = parts.v_plus.matrix();
    let v_minus = parts.v_minus.matrix();
    let mut s = CMatrix::zeros(GROUND_DIM, GROUND_DIM);
    for (k, inv) in inverses.iter().enumerate() {
        // V_− (H_NH − ε_k)⁻¹ V_+ P_k only fills column k.
        let col = v_minus * (inv * v_plus.column(k));
        s.set_column(k, &col);
    }
    let correction = (&s + s.adjoint()) * c(0.5);
    ComplexOperator::from_matrix(parts.h_g.matrix() - correction)
}

/// `c^{(l)}_{k,j} = √Γ_{k,l} H_{l,j} / (H_{l,l} − H_{j,j} − iΓ_l/2)`, all indices
/// zero-based in the 6-level basis.
pub fn effective_coefficient(
    h_full: &ComplexOperator,
    constants: &PhysicalConstants,
    k: usize,
    j: usize,
    l: usize,
) -> Result<C64> {
    if h_full.dim() != FULL_DIM
        || k >= GROUND_DIM
        || j >= GROUND_DIM
        || !(GROUND_DIM..FULL_DIM).contains(&l)
    {
        return Err(invalid(format!(
            "no effective coefficient for k={k}, j={j}, l={l}"
        )));
    }
    let branch = decay_channels(constants)
        .into_iter()
        .find(|&(to, from, _)| to == k && from == l)
        .map(|(_, _, rate)| rate)
        .unwrap_or(0.0);
    let gamma_l = total_excited_rates(constants)[l - GROUND_DIM];
    if gamma_l.is_nan() || gamma_l <= 0.0 {
        return Err(invalid(format!(
            "total decay rate of state {} must be positive",
            l + 1
        )));
    }
    let denom = h_full[(l, l)] - h_full[(j, j)] - 0.5 * IM * gamma_l;
    Ok(branch.sqrt() * h_full[(l, j)] / denom)
}

/// The seven effective jump operators, rate-absorbed, in the order
/// `(1,4), (2,4), (3,4), (1,5), (2,5), (2,6), (3,6)` as `(to, via)`.
pub fn effective_lindblad_terms(
    parts: &PartitionedOperators,
    constants: &PhysicalConstants,
) -> Result<Vec<LindbladTerm>> {
    constants.validate()?;
    require_diagonal(&parts.h_e, "excited Hamiltonian block")?;
    let h_full = parts.reassemble();
    decay_channels(constants)
        .into_iter()
        .map(|(k, l, _)| {
            let mut op = ComplexOperator::zeros(GROUND_DIM);
            let mut sources = Vec::new();
            for j in 0..GROUND_DIM {
                let z = effective_coefficient(&h_full, constants, k, j, l)?;
                op[(k, j)] = z;
                if h_full[(l, j)] != C64::default() {
                    sources.push(j);
                }
            }
            let from = if sources.len() == 1 {
                Some(sources[0])
            } else {
                None
            };
            Ok(LindbladTerm::absorbed(op).with_path(DecayPath {
                from,
                to: k,
                via: Some(l),
            }))
        })
        .collect()
}

/// Closed-form parameters of the reduced model under the ideal-mapping
/// conditions. Rates and shifts in rad/µs, phases in rad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveParameters {
    pub delta_eff: f64,
    pub omega_eff: f64,
    pub phi_eff: f64,
    pub alpha: f64,
    pub gamma_control: f64,
    pub gamma_probe: f64,
    pub gamma_decay: f64,
}

impl EffectiveParameters {
    /// `|H_eff(2,3)| = Ω_eff/√2`
    pub fn h23_abs(&self) -> f64 {
        self.omega_eff * FRAC_1_SQRT_2
    }

    /// `√(Γ_control Γ_probe)`
    pub fn sqrt_control_probe(&self) -> f64 {
        (self.gamma_control * self.gamma_probe).sqrt()
    }

    /// The ideal-form 3×3 Hamiltonian these parameters describe.
    pub fn hamiltonian(&self) -> ComplexOperator {
        let a = self.omega_eff * FRAC_1_SQRT_2;
        let h12 = -IM * a * C64::from_polar(1.0, self.phi_eff + PI - self.alpha);
        let h23 = -IM * a * C64::from_polar(1.0, self.phi_eff);
        let mut h = ComplexOperator::from_real_diagonal(&[self.delta_eff, 0.0, -self.delta_eff]);
        h[(0, 1)] = h12;
        h[(1, 0)] = h12.conj();
        h[(1, 2)] = h23;
        h[(2, 1)] = h23.conj();
        h
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn effective_parameters(
    cfg: &DriveConfig,
    constants: &PhysicalConstants,
) -> Result<EffectiveParameters> {
    if !cfg.ideal_mapping {
        return Err(invalid(
            "closed-form effective parameters need the ideal-mapping conditions",
        ));
    }
    cfg.validate()?;
    constants.validate()?;
    let g2 = constants.gamma_aux_dprime;
    let g1 = constants.gamma_aux_prime;
    let db = cfg.delta_b;
    let dd = cfg.delta_b - cfg.delta_b_prime;
    let (wp, w0, wpr) = (cfg.omega_plus1, cfg.omega_0, cfg.omega_prime);

    let delta_eff =
        -db - db * wp * wp / (g2 * g2 + 4.0 * db * db) - dd * wpr * wpr / (g1 * g1 + 4.0 * dd * dd);
    let x = 2.0 * db / g2;
    let omega_eff =
        SQRT_2 / 8.0 * db.abs() * w0 * wp / (g2 * g2 / 4.0 + db * db) * (1.0 + x * x).sqrt();
    let phi_eff = cfg.phi_minus1 - cfg.phi_0 + x.atan() + PI - FRAC_PI_2 * sgn(db);

    Ok(EffectiveParameters {
        delta_eff,
        omega_eff,
        phi_eff,
        alpha: cfg.alpha(),
        gamma_control: (g2 / 3.0) * (wp * wp / 4.0) / (db * db + g2 * g2 / 4.0),
        gamma_probe: (g2 / 3.0) * (w0 * w0 / 4.0) / (g2 * g2 / 4.0),
        gamma_decay: (g1 / 2.0) * (wpr * wpr / 4.0) / (dd * dd + g1 * g1 / 4.0),
    })
}

/// The reduced 3-level model.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveModel {
    pub hamiltonian: ComplexOperator,
    pub terms: Vec<LindbladTerm>,
    /// Closed-form parameters of the unscaled model, when the drive satisfies
    /// the ideal-mapping conditions.
    pub params: Option<EffectiveParameters>,
}

impl EffectiveModel {
    pub fn from_config(cfg: &DriveConfig, constants: &PhysicalConstants) -> Result<Self> {
        cfg.validate()?;
        let parts = partition(&build_full_hamiltonian(cfg))?;
        let hamiltonian = effective_hamiltonian(&parts, constants)?;
        let terms = effective_lindblad_terms(&parts, constants)?;
        let params = if cfg.ideal_mapping {
            Some(effective_parameters(cfg, constants)?)
        } else {
            None
        };
        Ok(Self {
            hamiltonian,
            terms,
            params,
        })
    }

    /// The term for decay into `to` via `via` (zero-based, 6-level indices).
    pub fn term(&self, to: usize, via: usize) -> Option<&LindbladTerm> {
        self.terms
            .iter()
            .find(|t| t.path().is_some_and(|p| p.to == to && p.via == Some(via)))
    }

    fn term_mut(&mut self, to: usize, via: usize) -> Option<&mut LindbladTerm> {
        self.terms
            .iter_mut()
            .find(|t| t.path().is_some_and(|p| p.to == to && p.via == Some(via)))
    }

    /// `c^{(via)}_{to, from}`; zero for absent paths.
    pub fn coefficient(&self, to: usize, from: usize, via: usize) -> C64 {
        self.term(to, via)
            .map(|t| t.operator()[(to, from)])
            .unwrap_or_default()
    }

    pub fn master_equation(&self) -> MasterEquation {
        MasterEquation {
            hamiltonian: self.hamiltonian.clone(),
            terms: self.terms.clone(),
        }
    }
}

/// Which coefficients the ad hoc factor β multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaApproach {
    /// Self-decay through 5 and 6 plus every path through 4; β = 0 leaves the
    /// ideal gain/damping pair with `γ_g = γ_d = Γ_decay`.
    One,
    /// Self-decay through 5 and 6, every probe path, and the control paths
    /// into 1 and 3; β = 0 keeps the control-mediated paths into 2.
    Two,
}

impl BetaApproach {
    pub fn number(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(invalid(format!("approach must be 1 or 2, got {n}"))),
        }
    }

    /// Scaled coefficients as `(to, from, via)`, zero-based.
    pub fn scaled_coefficients(self) -> Vec<(usize, usize, usize)> {
        let mut out = vec![(0, 0, 4), (2, 2, 5)];
        match self {
            Self::One => {
                for k in 0..3 {
                    for j in 0..3 {
                        out.push((k, j, 3));
                    }
                }
            }
            Self::Two => {
                for k in 0..3 {
                    out.push((k, 1, 3));
                }
                for k in [0, 2] {
                    out.push((k, 0, 3));
                    out.push((k, 2, 3));
                }
            }
        }
        out
    }
}

pub fn beta_scaled_model(
    model: &EffectiveModel,
    beta: f64,
    approach: BetaApproach,
) -> Result<EffectiveModel> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("beta must lie in [0, 1], got {beta}")));
    }
    let mut out = model.clone();
    if beta == 1.0 {
        return Ok(out);
    }
    for (to, from, via) in approach.scaled_coefficients() {
        if let Some(t) = out.term_mut(to, via) {
            t.operator_mut()[(to, from)] *= beta;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rb87::mhz;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn zero_hamiltonian_partitions_to_zero_blocks() {
        let p = partition(&ComplexOperator::zeros(6)).unwrap();
        for b in [&p.h_g, &p.h_e, &p.v_plus, &p.v_minus] {
            assert_eq!(b.max_abs(), 0.0);
        }
    }

    #[test]
    fn v_plus_holds_drive_entries() {
        let cfg = DriveConfig::standard(mhz(0.4));
        let h = build_full_hamiltonian(&cfg);
        let p = partition(&h).unwrap();
        let nonzero = p.v_plus.matrix().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 5);
        assert_eq!(p.v_plus[(0, 0)], h[(3, 0)]);
        assert_eq!(p.v_plus[(0, 1)], h[(3, 1)]);
        assert_eq!(p.v_plus[(0, 2)], h[(3, 2)]);
        assert_eq!(p.v_plus[(1, 0)], h[(4, 0)]);
        assert_eq!(p.v_plus[(2, 2)], h[(5, 2)]);
        assert_eq!(p.reassemble(), h);
    }

    #[test]
    fn nonhermitian_with_zero_excited_block() {
        let c = PhysicalConstants::rb87();
        let p = partition(&ComplexOperator::zeros(6)).unwrap();
        let h = nonhermitian_hamiltonian(&p, &c);
        assert!(close(h[(0, 0)].im, -c.gamma_aux_dprime / 2.0, 1e-15));
        assert!(close(h[(1, 1)].im, -c.gamma_aux_prime / 2.0, 1e-15));
        assert!(close(h[(2, 2)].im, -c.gamma_aux_prime / 2.0, 1e-15));
    }

    #[test]
    fn drive_free_effective_hamiltonian_is_zeeman() {
        let c = PhysicalConstants::rb87();
        let mut cfg = DriveConfig::default().with_delta_b(mhz(0.4), &c);
        cfg.omega_plus1 = 0.0;
        let model = EffectiveModel::from_config(&cfg, &c).unwrap();
        let expected = ComplexOperator::from_real_diagonal(&[-mhz(0.4), 0.0, mhz(0.4)]);
        assert!(model.hamiltonian.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn table_values_at_point_b() {
        let c = PhysicalConstants::rb87();
        let p = effective_parameters(&DriveConfig::standard(mhz(0.4)), &c).unwrap();
        let f = |x: f64| x / mhz(1.0);
        assert!(close(f(p.delta_eff.abs()), 1.437, 1e-3));
        assert!(close(f(p.h23_abs()), 0.051, 1e-3));
        assert!(close(f(p.gamma_control), 4.875, 1e-3));
        assert!(close(f(p.gamma_probe), 0.055, 1e-3));
        assert!(close(f(p.gamma_decay), 0.776, 1e-3));
        assert!(close(f(p.sqrt_control_probe()), 0.518, 1e-3));
    }

    #[test]
    fn zero_field_parameters() {
        let p =
            effective_parameters(&DriveConfig::standard(0.0), &PhysicalConstants::rb87()).unwrap();
        assert_eq!(p.delta_eff, 0.0);
        assert_eq!(p.omega_eff, 0.0);
    }

    #[test]
    fn parameters_require_ideal_mapping() {
        let mut cfg = DriveConfig::standard(mhz(0.4));
        cfg.ideal_mapping = false;
        assert!(effective_parameters(&cfg, &PhysicalConstants::rb87()).is_err());
    }

    #[test]
    fn singular_propagator_is_reported() {
        // Zero linewidths are rejected before inversion; force a pole instead by
        // putting an excited energy on top of a ground energy with no decay.
        let mut h = ComplexOperator::zeros(6);
        h[(0, 3)] = c(1.0);
        h[(3, 0)] = c(1.0);
        let parts = partition(&h).unwrap();
        let constants = PhysicalConstants {
            gamma_aux_dprime: 1e-300,
            ..PhysicalConstants::rb87()
        };
        let err = effective_hamiltonian(&parts, &constants).unwrap_err();
        assert!(matches!(err, Error::NumericalSingularity { k: 0 }));
    }

    #[test]
    fn beta_one_is_identity() {
        let m = EffectiveModel::from_config(
            &DriveConfig::standard(mhz(0.4)),
            &PhysicalConstants::rb87(),
        )
        .unwrap();
        for a in [BetaApproach::One, BetaApproach::Two] {
            assert_eq!(beta_scaled_model(&m, 1.0, a).unwrap(), m);
        }
        assert!(beta_scaled_model(&m, 1.5, BetaApproach::One).is_err());
        assert!(beta_scaled_model(&m, -0.1, BetaApproach::Two).is_err());
    }

    #[test]
    fn approach_two_at_zero_keeps_control_paths_into_two() {
        let m = EffectiveModel::from_config(
            &DriveConfig::standard(mhz(0.4)),
            &PhysicalConstants::rb87(),
        )
        .unwrap();
        let s = beta_scaled_model(&m, 0.0, BetaApproach::Two).unwrap();
        let l24 = s.term(1, 3).unwrap().operator();
        assert_eq!(l24[(1, 0)], m.coefficient(1, 0, 3));
        assert_eq!(l24[(1, 2)], m.coefficient(1, 2, 3));
        assert_eq!(l24[(1, 1)], C64::default());
        assert_eq!(s.term(0, 3).unwrap().operator().max_abs(), 0.0);
        assert_eq!(s.term(2, 3).unwrap().operator().max_abs(), 0.0);
    }
}
