//! Closed-form time evolution of the probe-free reduced model in three
//! limits: (i) zero field and no decay beam, (ii) zero field with the decay
//! beam and zero control phases, (iii) finite field without control beams.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::operator::{ComplexOperator, DensityMatrix};
use crate::rb87::PhysicalConstants;

/// Parameters of the analytic solutions; rates in rad/µs, phase in rad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleParams {
    /// Common control magnitude `|Ω_{±1}|`.
    pub omega_c: f64,
    pub omega_prime: f64,
    /// `φ_{−1} − φ_{+1}`
    pub phi_diff: f64,
    pub gamma_aux_dprime: f64,
    pub gamma_aux_prime: f64,
    pub delta_b: f64,
    pub delta_b_prime: f64,
}

impl OracleParams {
    pub fn new(
        omega_c: f64,
        omega_prime: f64,
        phi_diff: f64,
        constants: &PhysicalConstants,
    ) -> Self {
        Self {
            omega_c,
            omega_prime,
            phi_diff,
            gamma_aux_dprime: constants.gamma_aux_dprime,
            gamma_aux_prime: constants.gamma_aux_prime,
            delta_b: 0.0,
            delta_b_prime: 0.0,
        }
    }

    pub fn with_zeeman(mut self, delta_b: f64, delta_b_prime: f64) -> Self {
        self.delta_b = delta_b;
        self.delta_b_prime = delta_b_prime;
        self
    }

    /// `Γ_eff'' = 2|Ω_c|²/(3Γ'')`
    pub fn gamma_eff_dprime(&self) -> f64 {
        2.0 * self.omega_c * self.omega_c / (3.0 * self.gamma_aux_dprime)
    }

    /// Decay-beam rate at zero field, `|Ω'|²/(2Γ')`.
    pub fn gamma_eff_prime_zero_field(&self) -> f64 {
        self.omega_prime * self.omega_prime / (2.0 * self.gamma_aux_prime)
    }

    /// Decay-beam rate at finite field.
    pub fn gamma_eff_prime(&self) -> f64 {
        let g = self.gamma_aux_prime;
        let dd = self.delta_b - self.delta_b_prime;
        (g / 2.0) * (self.omega_prime / 2.0).powi(2) / (dd * dd + (g / 2.0).powi(2))
    }

    /// Shift of the outer levels without control beams.
    pub fn delta_eff_prime(&self) -> f64 {
        let g = self.gamma_aux_prime;
        let dd = self.delta_b - self.delta_b_prime;
        -self.delta_b - dd * self.omega_prime * self.omega_prime / (g * g + 4.0 * dd * dd)
    }

    /// `Γ_1` of the zero-field solution with decay beam.
    pub fn gamma_1(&self) -> f64 {
        let a = self.gamma_eff_dprime();
        let b = self.gamma_eff_prime_zero_field();
        (4.0 * a * a + 2.0 * a * b + b * b).sqrt()
    }

    /// `Γ_{2,±}`; `plus` selects the sign.
    pub fn gamma_2(&self, plus: bool) -> f64 {
        let a = self.gamma_eff_dprime();
        let b = self.gamma_eff_prime_zero_field();
        let s = if plus { 1.0 } else { -1.0 };
        let g1 = self.gamma_1();
        (4.0 * a * a + b * (b + s * g1) + a * (2.0 * b + s * g1)).sqrt()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

/// Caps `t` at `100 / rate_min`; beyond that every transient is below e^{-100}.
fn saturate(t: f64, rate_min: f64) -> f64 {
    if rate_min > 0.0 {
        t.min(100.0 / rate_min)
    } else {
        t
    }
}

fn assemble(upper: [[C64; 3]; 3], labels: &[String]) -> Result<DensityMatrix> {
    let op = ComplexOperator::from_fn(3, |i, j| {
        if i <= j {
            upper[i][j]
        } else {
            upper[j][i].conj()
        }
    });
    DensityMatrix::new(op, labels.to_vec())
}

/// Zero field, no decay beam: no limit cycle, the long-time state remembers
/// `ρ(0)`.
pub fn case_i_solution(rho0: &DensityMatrix, t: f64, p: &OracleParams) -> Result<DensityMatrix> {
    check_time(t)?;
    if rho0.dim() != 3 {
        return Err(invalid("oracle solutions are for 3-level states"));
    }
    let g = p.gamma_eff_dprime();
    let t = saturate(t, 1.5 * g);
    let e1 = (-1.5 * g * t).exp();
    let e2 = (-2.0 * g * t).exp();
    let ph = C64::from_polar(1.0, p.phi_diff);
    let r = |i: usize, j: usize| rho0[(i, j)];
    let a11 = r(0, 0).re;
    let a33 = r(2, 2).re;
    let re13 = (r(0, 2) * ph.conj()).re;

    let rho11 = a11 * (0.375 + 0.5 * e1 + 0.125 * e2)
        + re13 * (-0.25 + 0.25 * e2)
        + a33 * (0.375 - 0.5 * e1 + 0.125 * e2);
    let rho33 = a11 * (0.375 - 0.5 * e1 + 0.125 * e2)
        + re13 * (-0.25 + 0.25 * e2)
        + a33 * (0.375 + 0.5 * e1 + 0.125 * e2);
    let rho22 =
        1.0 + a11 * (-0.75 - 0.25 * e2) + re13 * (0.5 - 0.5 * e2) + a33 * (-0.75 - 0.25 * e2);
    let rho12 = r(0, 1) * (0.5 + 0.5 * e1) + r(1, 2).conj() * ph * (-0.5 + 0.5 * e1);
    let rho23 = r(0, 1).conj() * ph * (-0.5 + 0.5 * e1) + r(1, 2) * (0.5 + 0.5 * e1);
    let rho13 = a11 * ph * (-0.375 + 0.375 * e2)
        + r(0, 2) * (0.125 + 0.5 * e1 + 0.375 * e2)
        + r(0, 2).conj() * ph * ph * (0.125 - 0.5 * e1 + 0.375 * e2)
        + a33 * ph * (-0.375 + 0.375 * e2);

    let z = C64::default();
    let re = |x: f64| C64::new(x, 0.0);
    assemble(
        [
            [re(rho11), rho12, rho13],
            [z, re(rho22), rho23],
            [z, z, re(rho33)],
        ],
        rho0.labels(),
    )
}

/// The two elements printed for the zero-field case with decay beam.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaseTwoElements {
    pub rho22: f64,
    pub rho13: C64,
}

/// Zero field, zero control phases, finite decay beam.
pub fn case_ii_solution(rho0: &DensityMatrix, t: f64, p: &OracleParams) -> Result<CaseTwoElements> {
    check_time(t)?;
    if rho0.dim() != 3 {
        return Err(invalid("oracle solutions are for 3-level states"));
    }
    if p.omega_prime.is_nan() || p.omega_prime <= 0.0 {
        return Err(invalid("the decay-beam solution needs a finite decay beam"));
    }
    let a = p.gamma_eff_dprime();
    let b = p.gamma_eff_prime_zero_field();
    let g1 = p.gamma_1();
    let g2p = p.gamma_2(true);
    let g2m = p.gamma_2(false);
    let slow = -a - 1.5 * b + 0.5 * g1;
    let fast = -a - 1.5 * b - 0.5 * g1;
    let coh = -1.5 * a - 2.0 * b;
    let t = saturate(t, (-slow).min(-coh));
    let es = (slow * t).exp();
    let ef = (fast * t).exp();
    let ec = (coh * t).exp();

    let outer = rho0[(0, 0)].re + rho0[(2, 2)].re;
    let re13 = rho0[(0, 2)].re;
    let im13 = rho0[(0, 2)].im;
    let k = 1.0 / (2.0 * g1 * g1);

    let rho22 = 1.0 - k * es * (-2.0 * a * g1 * re13 + g2p * g2p * outer)
        + k * ef * ((-g1 * g1 + a * g1 + b * g1) * outer - 2.0 * a * g1 * re13);
    let k4 = 1.0 / (4.0 * g1 * g1);
    let rho13_re = -k4 * es * (3.0 * a * g1 * outer - 2.0 * g2m * g2m * re13)
        + k4 * ef * (3.0 * a * g1 * outer + 2.0 * g2p * g2p * re13);
    Ok(CaseTwoElements {
        rho22,
        rho13: C64::new(rho13_re, ec * im13),
    })
}

/// Finite field without control beams: every element decays independently
/// and the state ends in the middle level.
pub fn case_iii_solution(rho0: &DensityMatrix, t: f64, p: &OracleParams) -> Result<DensityMatrix> {
    check_time(t)?;
    if rho0.dim() != 3 {
        return Err(invalid("oracle solutions are for 3-level states"));
    }
    let g = p.gamma_eff_prime();
    let d = p.delta_eff_prime();
    let t = saturate(t, g);
    let rate = C64::new(g, d);
    let e = (-g * t).exp();
    let e1 = (-rate * t).exp();
    let e2 = (-2.0 * rate * t).exp();
    let r = |i: usize, j: usize| rho0[(i, j)];
    let z = C64::default();
    let re = |x: f64| C64::new(x, 0.0);
    let a11 = r(0, 0).re;
    let a33 = r(2, 2).re;
    assemble(
        [
            [re(a11 * e), r(0, 1) * e1, r(0, 2) * e2],
            [z, re(1.0 - (a11 + a33) * e), r(1, 2) * e1],
            [z, z, re(a33 * e)],
        ],
        rho0.labels(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rb87::mhz;

    fn params() -> OracleParams {
        OracleParams::new(mhz(9.5), mhz(3.0), 0.0, &PhysicalConstants::rb87())
    }

    #[test]
    fn rate_arithmetic() {
        let p = params();
        assert!((p.gamma_eff_dprime() / mhz(1.0) - 9.920).abs() < 1e-3);
        assert!((p.gamma_eff_prime_zero_field() / mhz(1.0) - 0.783).abs() < 1e-3);
        assert_eq!(p.gamma_eff_prime(), p.gamma_eff_prime_zero_field());
        assert_eq!(p.delta_eff_prime(), 0.0);
    }

    #[test]
    fn case_i_fixed_point_and_limit() {
        let p = params();
        let mid = DensityMatrix::basis_state(3, 1);
        let r = case_i_solution(&mid, 1.3, &p).unwrap();
        assert!(r.max_abs_diff(mid.op()) < 1e-15);

        let r = case_i_solution(&DensityMatrix::basis_state(3, 0), 1e6, &p).unwrap();
        assert!((r[(0, 0)].re - 0.375).abs() < 1e-15);
        assert!((r[(1, 1)].re - 0.25).abs() < 1e-15);
        assert!((r[(2, 2)].re - 0.375).abs() < 1e-15);
        assert!((r[(0, 2)].re + 0.375).abs() < 1e-15);
    }

    #[test]
    fn case_ii_limits() {
        let p = params();
        let r = case_ii_solution(&DensityMatrix::basis_state(3, 0), 1e6, &p).unwrap();
        assert!((r.rho22 - 1.0).abs() < 1e-15);
        assert!(r.rho13.norm() < 1e-15);
        for t in [0.0, 0.1, 1.0] {
            let r = case_ii_solution(&DensityMatrix::basis_state(3, 1), t, &p).unwrap();
            assert!((r.rho22 - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn case_ii_initial_value() {
        let r = case_ii_solution(&DensityMatrix::basis_state(3, 0), 0.0, &params()).unwrap();
        assert!(r.rho22.abs() < 1e-14);
        assert!(r.rho13.norm() < 1e-14);
    }

    #[test]
    fn case_iii_coherence_decays_twice_as_fast() {
        let p = params().with_zeeman(mhz(0.4), mhz(0.1314));
        let mut rho = ComplexOperator::identity(3) * (1.0 / 3.0);
        rho[(0, 2)] = C64::new(0.1, 0.05);
        rho[(2, 0)] = C64::new(0.1, -0.05);
        rho[(0, 1)] = C64::new(0.1, 0.0);
        rho[(1, 0)] = C64::new(0.1, 0.0);
        let rho0 = DensityMatrix::from_operator(rho).unwrap();
        let t = 0.3;
        let r = case_iii_solution(&rho0, t, &p).unwrap();
        let f1 = r[(0, 1)] / rho0[(0, 1)];
        let f2 = r[(0, 2)] / rho0[(0, 2)];
        assert!((f1 * f1 - f2).norm() < 1e-15);
        let end = case_iii_solution(&rho0, 1e6, &p).unwrap();
        assert!(end.max_abs_diff(&ComplexOperator::projector(3, 1)) < 1e-15);
    }

    #[test]
    fn negative_time_rejected() {
        let rho = DensityMatrix::basis_state(3, 0);
        let p = params();
        assert!(case_i_solution(&rho, -1.0, &p).is_err());
        assert!(case_ii_solution(&rho, -1.0, &p).is_err());
        assert!(case_iii_solution(&rho, -1.0, &p).is_err());
    }
}
