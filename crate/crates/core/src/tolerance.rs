/// Numerical thresholds shared by the solvers and the acceptance checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Hermiticity threshold for generators: `max|A - A†| <= hermitian * max(1, max|A|)`.
    pub hermitian: f64,
    /// Trace / Hermiticity slack for density matrices.
    pub density: f64,
    /// Singular values below `null_space * sigma_max` count toward the null multiplicity.
    pub null_space: f64,
    /// Steady-state residual bound, relative to `sigma_max`.
    pub residual: f64,
    /// Per-element successive-refinement target for the time integrator.
    pub integrator: f64,
    /// Largest number of RK4 steps tried on a single output interval.
    pub integrator_max_steps: usize,
    /// Uniformity threshold in phi used to flag fields without a phase preference.
    pub phase_uniformity: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        density: 1e-10,
        null_space: 1e-8,
        residual: 1e-9,
        integrator: 1e-10,
        integrator_max_steps: 1 << 22,
        phase_uniformity: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
