//! Synchronization measure, spin coherent states and Husimi-Q fields.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::operator::{c, unitary_exp, CVector, ComplexOperator};
use crate::rb87::{FULL_DIM, GROUND_DIM};
use crate::spin::SpinOperators;
use crate::tolerance::Tolerances;

pub const DEFAULT_N_THETA: usize = 181;
pub const DEFAULT_N_PHI: usize = 360;

/// `|Σ_M ρ_{M,M+1}|` over the spin basis `+S..−S`, with `2S = twice_s`.
pub fn sync_measure(rho: &ComplexOperator, twice_s: usize) -> Result<f64> {
    if twice_s == 0 || rho.dim() != twice_s + 1 {
        return Err(Error::DimensionMismatch {
            expected: twice_s + 1,
            actual: rho.dim(),
        });
    }
    let s: C64 = (0..twice_s).map(|i| rho[(i, i + 1)]).sum();
    Ok(s.norm())
}

/// Spin-1 coherent state `exp(−iφS_z) exp(−iθS_y) |+1⟩`.
pub fn spin_coherent_state(theta: f64, phi: f64) -> CVector {
    let s = SpinOperators::spin_one();
    let ry = unitary_exp(&(s.y() * theta)).expect("S_y is Hermitian");
    let rz = unitary_exp(&(s.z() * phi)).expect("S_z is Hermitian");
    let up = CVector::from_column_slice(&[c(1.0), c(0.0), c(0.0)]);
    (&rz * &ry).apply(&up)
}

/// `Q(θ_i, φ_j)` on a uniform grid, θ-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HusimiField {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// `values[i][j] = Q(theta[i], phi[j])`
    pub values: Vec<Vec<f64>>,
    pub twice_s: usize,
}

/// Composite Simpson weights on `n` equally spaced points, with a closing
/// 3/8 panel when the interval count is odd.
fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    let intervals = n - 1;
    if intervals == 1 {
        w[0] = h / 2.0;
        w[1] = h / 2.0;
        return w;
    }
    let simpson_end = if intervals.is_multiple_of(2) {
        intervals
    } else {
        intervals - 3
    };
    for k in (0..simpson_end).step_by(2) {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
    }
    if simpson_end != intervals {
        let k = simpson_end;
        w[k] += 3.0 * h / 8.0;
        w[k + 1] += 9.0 * h / 8.0;
        w[k + 2] += 9.0 * h / 8.0;
        w[k + 3] += 3.0 * h / 8.0;
    }
    w
}

impl HusimiField {
    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    fn theta_weights(&self) -> Vec<f64> {
        let h = PI / (self.n_theta() - 1) as f64;
        simpson_weights(self.n_theta(), h)
            .into_iter()
            .zip(&self.theta)
            .map(|(w, t)| w * t.sin())
            .collect()
    }

    /// `∫ Q dcosθ` at each grid φ (Simpson in θ).
    pub fn phi_profile(&self) -> Vec<f64> {
        let w = self.theta_weights();
        (0..self.n_phi())
            .map(|j| (0..self.n_theta()).map(|i| w[i] * self.values[i][j]).sum())
            .collect()
    }

    /// `∫ Q sinθ dθ dφ`; Simpson in θ and the (spectrally exact) periodic
    /// trapezoid in φ.
    pub fn normalization(&self) -> f64 {
        let h_phi = TAU / self.n_phi() as f64;
        self.phi_profile().iter().sum::<f64>() * h_phi
    }

    /// Peak-to-peak spread of the φ profile.
    pub fn phi_profile_spread(&self) -> f64 {
        let p = self.phi_profile();
        let max = p.iter().copied().fold(f64::MIN, f64::max);
        let min = p.iter().copied().fold(f64::MAX, f64::min);
        max - min
    }

    /// Largest variation along φ at fixed θ.
    pub fn phi_variation(&self) -> f64 {
        self.values
            .iter()
            .map(|row| {
                let max = row.iter().copied().fold(f64::MIN, f64::max);
                let min = row.iter().copied().fold(f64::MAX, f64::min);
                max - min
            })
            .fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::MAX, f64::min)
    }

    /// Grid indices of the largest value.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut v = f64::MIN;
        for (i, row) in self.values.iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                if q > v {
                    v = q;
                    best = (i, j);
                }
            }
        }
        best
    }
}

pub fn husimi_q(rho: &ComplexOperator, n_theta: usize, n_phi: usize) -> Result<HusimiField> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: rho.dim(),
        });
    }
    if n_theta < 2 || n_phi < 3 {
        return Err(invalid(format!(
            "Husimi grid needs at least 2 theta and 3 phi points, got {n_theta} x {n_phi}"
        )));
    }
    let theta: Vec<f64> = (0..n_theta)
        .map(|i| i as f64 * PI / (n_theta - 1) as f64)
        .collect();
    let phi: Vec<f64> = (0..n_phi)
        .map(|j| -PI + (j + 1) as f64 * TAU / n_phi as f64)
        .collect();
    let prefactor = 3.0 / (4.0 * PI);
    // |θ,φ⟩_m = e^{−iφ m} |θ,0⟩_m, so only the θ rotation needs a matrix exponential.
    let m = [1.0, 0.0, -1.0];
    let values = theta
        .iter()
        .map(|&t| {
            let base = spin_coherent_state(t, 0.0);
            phi.iter()
                .map(|&p| {
                    let v = CVector::from_iterator(
                        3,
                        (0..3).map(|k| base[k] * C64::from_polar(1.0, -p * m[k])),
                    );
                    prefactor * rho.expectation(&v).re
                })
                .collect()
        })
        .collect();
    Ok(HusimiField {
        theta,
        phi,
        values,
        twice_s: 2,
    })
}

/// Location of the Husimi maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseMaximum {
    Peak {
        theta: f64,
        phi: f64,
    },
    /// The field does not depend on φ.
    NoPhasePreference,
}

impl PhaseMaximum {
    pub fn phi(&self) -> Option<f64> {
        match self {
            Self::Peak { phi, .. } => Some(*phi),
            Self::NoPhasePreference => None,
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match self {
            Self::Peak { theta, .. } => Some(*theta),
            Self::NoPhasePreference => None,
        }
    }
}

/// Vertex offset (in grid units) of the parabola through three samples.
fn parabolic_offset(fm: f64, f0: f64, fp: f64) -> f64 {
    let den = fm - 2.0 * f0 + fp;
    if den >= 0.0 {
        return 0.0;
    }
    (0.5 * (fm - fp) / den).clamp(-0.5, 0.5)
}

/// Wraps into `(−π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

pub fn husimi_max(field: &HusimiField) -> PhaseMaximum {
    if field.phi_variation() <= Tolerances::DEFAULT.phase_uniformity {
        return PhaseMaximum::NoPhasePreference;
    }
    let (i, j) = field.argmax();
    let nt = field.n_theta();
    let np = field.n_phi();
    let h_t = PI / (nt - 1) as f64;
    let h_p = TAU / np as f64;

    let theta = if i > 0 && i + 1 < nt {
        let v = |k: usize| field.values[k][j];
        field.theta[i] + h_t * parabolic_offset(v(i - 1), v(i), v(i + 1))
    } else {
        field.theta[i]
    };
    let row = &field.values[i];
    let dj = parabolic_offset(row[(j + np - 1) % np], row[j], row[(j + 1) % np]);
    let mut phi = wrap_phase(field.phi[j] + h_p * dj);
    if PI - phi.abs() < h_p {
        phi = PI;
    }
    PhaseMaximum::Peak { theta, phi }
}

/// Top-left 3×3 block of a 6-level state, optionally renormalized to unit
/// trace.
pub fn ground_block(rho6: &ComplexOperator, renormalize: bool) -> Result<ComplexOperator> {
    if rho6.dim() != FULL_DIM {
        return Err(Error::DimensionMismatch {
            expected: FULL_DIM,
            actual: rho6.dim(),
        });
    }
    let block = ComplexOperator::from_matrix(rho6.block(0, 0, GROUND_DIM, GROUND_DIM))?;
    if !renormalize {
        return Ok(block);
    }
    let tr = block.trace().re;
    if tr.abs() < 1e-300 {
        return Err(invalid("ground block has zero trace"));
    }
    Ok(block * (1.0 / tr))
}
