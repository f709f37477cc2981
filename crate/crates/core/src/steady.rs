//! Steady states from the Liouvillian null space, and fixed-grid RK4 time
//! evolution.

use crate::error::{invalid, Error, Result};
use crate::operator::{c, devectorize, vectorize, CMatrix, CVector, DensityMatrix, Superoperator};
use crate::tolerance::Tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct SteadyStateResult {
    pub rho: DensityMatrix,
    /// `‖L vec(ρ)‖₂`
    pub residual: f64,
    /// Largest singular value of `L`, the scale for `residual`.
    pub sigma_max: f64,
    pub null_multiplicity: usize,
    pub unique: bool,
}

impl SteadyStateResult {
    pub fn relative_residual(&self) -> f64 {
        if self.sigma_max == 0.0 {
            self.residual
        } else {
            self.residual / self.sigma_max
        }
    }
}

/// Normalizes a vectorized operator to a unit-trace Hermitian density matrix.
fn to_density(v: &CVector) -> Result<DensityMatrix> {
    let op = devectorize(v)?;
    let tr = op.trace();
    if tr.norm() < 1e-300 {
        return Err(invalid(
            "null vector has zero trace; generator is not trace preserving",
        ));
    }
    let op = (&op * (c(1.0) / tr)).hermitian_part();
    let tr = op.trace().re;
    DensityMatrix::from_operator(op * (1.0 / tr))
}

pub fn steady_state(l: &Superoperator) -> Result<SteadyStateResult> {
    steady_state_with(l, &Tolerances::DEFAULT)
}

/// Smallest-singular-direction solution of `L vec(ρ) = 0`.
///
/// With a degenerate null space the representative is the projection of
/// `vec(I)` onto it, which is the state reached from the maximally mixed
/// state only when the dynamics is unital; it is a deterministic choice, not a
/// physical prediction.
pub fn steady_state_with(l: &Superoperator, tol: &Tolerances) -> Result<SteadyStateResult> {
    let n = l.dim();
    let svd = l.matrix().clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma_max = svd.singular_values[order[0]];
    let null: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] <= tol.null_space * sigma_max)
        .collect();
    let null_multiplicity = null.len().max(1);
    let null_vec = |i: usize| -> CVector { v_t.row(i).adjoint() };

    let v = if null.len() <= 1 {
        null_vec(order[n - 1])
    } else {
        let id = vectorize(&crate::operator::ComplexOperator::identity(l.hilbert_dim()));
        let mut proj = CVector::zeros(n);
        for &i in &null {
            let x = null_vec(i);
            proj += &x * x.dotc(&id);
        }
        proj
    };
    let rho = to_density(&v)?;
    let residual = l.apply_vec(&vectorize(&rho)).norm();
    Ok(SteadyStateResult {
        rho,
        residual,
        sigma_max,
        null_multiplicity,
        unique: null_multiplicity == 1,
    })
}

fn rk4_step(m: &CMatrix, y: &CVector, h: f64) -> CVector {
    let hc = c(h);
    let k1 = m * y;
    let k2 = m * (y + &k1 * (hc * 0.5));
    let k3 = m * (y + &k2 * (hc * 0.5));
    let k4 = m * (y + &k3 * hc);
    y + (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * (hc / 6.0)
}

fn rk4_span(m: &CMatrix, y: &CVector, dt: f64, steps: usize) -> CVector {
    let h = dt / steps as f64;
    let mut out = y.clone();
    for _ in 0..steps {
        out = rk4_step(m, &out, h);
    }
    out
}

fn max_abs_diff(a: &CVector, b: &CVector) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn evolve(
    l: &Superoperator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    evolve_with(l, rho0, t_grid, &Tolerances::DEFAULT)
}

/// Classical RK4 on each output interval, doubling the step count until two
/// successive refinements agree element-wise to `tol.integrator`.
pub fn evolve_with(
    l: &Superoperator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    tol: &Tolerances,
) -> Result<Vec<DensityMatrix>> {
    if rho0.dim() != l.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: l.hilbert_dim(),
            actual: rho0.dim(),
        });
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.first().is_some_and(|&t| t < 0.0) {
        return Err(invalid("time grid must be finite and start at t >= 0"));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("time grid must be ascending"));
    }
    let m = l.matrix();
    let mut y = vectorize(rho0);
    let mut t = 0.0;
    // Step size carried between intervals so refinement rarely restarts at 1.
    let mut h_hint = f64::INFINITY;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t_next in t_grid {
        let dt = t_next - t;
        if dt > 0.0 {
            let mut steps = ((dt / h_hint).ceil() as usize).max(1);
            let mut coarse = rk4_span(m, &y, dt, steps);
            loop {
                if steps * 2 > tol.integrator_max_steps {
                    let fine = rk4_span(m, &y, dt, steps * 2);
                    return Err(Error::Integration {
                        requested: tol.integrator,
                        achieved: max_abs_diff(&coarse, &fine),
                    });
                }
                let fine = rk4_span(m, &y, dt, steps * 2);
                let err = max_abs_diff(&coarse, &fine);
                steps *= 2;
                coarse = fine;
                if err <= tol.integrator {
                    break;
                }
            }
            y = coarse;
            h_hint = dt / (steps / 2).max(1) as f64;
        }
        t = t_next;
        let op = devectorize(&y)?;
        let rho = DensityMatrix::new(op, rho0.labels().to_vec()).map_err(|_| {
            invalid("trajectory left the unit-trace Hermitian set; generator is not a Lindbladian")
        })?;
        out.push(rho);
    }
    Ok(out)
}

/// `max |Σ_i L_{(ii), col}|` check reused by callers that accept user-built
/// superoperators.
pub fn is_trace_preserving(l: &Superoperator, tol: f64) -> bool {
    l.trace_defect() <= tol
}
