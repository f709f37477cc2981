//! Dense complex operators, Lindblad terms and Liouvillian superoperators.
//!
//! Generators are stored in angular-frequency units (rad/µs). Density matrices
//! are vectorized column by column, so `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.

use std::fmt;
use std::ops::{Add, AddAssign, Deref, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::tolerance::Tolerances;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// The imaginary unit.
pub const IM: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Square complex matrix: Hamiltonians, jump operators, density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator(CMatrix);

impl ComplexOperator {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(invalid(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(invalid("operator dimension must be positive"));
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(CMatrix::from_fn(dim, dim, f))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { c(diag[i]) } else { C64::default() })
    }

    /// Row-major construction, convenient for literal matrices.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("rows do not form a square matrix"));
        }
        Self::from_matrix(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// `|i⟩⟨j|` in a `dim`-level space.
    pub fn ket_bra(dim: usize, i: usize, j: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(i, j)] = c(1.0);
        Self(m)
    }

    pub fn projector(dim: usize, i: usize) -> Self {
        Self::ket_bra(dim, i, i)
    }

    /// `|a⟩⟨b|`
    pub fn outer(ket: &CVector, bra: &CVector) -> Self {
        Self(ket * bra.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max|A - A†|`
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err = 0.0f64;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_error() <= rel_tol * self.max_abs().max(1.0)
    }

    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c(0.5))
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    /// `⟨v|A|v⟩`
    pub fn expectation(&self, v: &CVector) -> C64 {
        v.dotc(&(&self.0 * v))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .hermitian_part()
            .0
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Copy of the `rows × cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        self.0.view((r0, c0), (rows, cols)).into_owned()
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.dim(),
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexOperator {
    type Output = C64;
    fn index(&self, ij: (usize, usize)) -> &C64 {
        &self.0[ij]
    }
}

impl IndexMut<(usize, usize)> for ComplexOperator {
    fn index_mut(&mut self, ij: (usize, usize)) -> &mut C64 {
        &mut self.0[ij]
    }
}

impl fmt::Display for ComplexOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let z = self.0[(i, j)];
                write!(f, "{:>12.5e}{:+.5e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexOperator> for &ComplexOperator {
            type Output = ComplexOperator;
            fn $method(self, rhs: &ComplexOperator) -> ComplexOperator {
                ComplexOperator(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexOperator> for ComplexOperator {
            type Output = ComplexOperator;
            fn $method(self, rhs: ComplexOperator) -> ComplexOperator {
                ComplexOperator(self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&ComplexOperator> for ComplexOperator {
    fn add_assign(&mut self, rhs: &ComplexOperator) {
        self.0 += &rhs.0;
    }
}

impl Mul<C64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, z: C64) -> ComplexOperator {
        ComplexOperator(&self.0 * z)
    }
}

impl Mul<C64> for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, z: C64) -> ComplexOperator {
        ComplexOperator(self.0 * z)
    }
}

impl Mul<f64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, x: f64) -> ComplexOperator {
        ComplexOperator(&self.0 * c(x))
    }
}

impl Mul<f64> for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, x: f64) -> ComplexOperator {
        ComplexOperator(self.0 * c(x))
    }
}

impl Neg for ComplexOperator {
    type Output = ComplexOperator;
    fn neg(self) -> ComplexOperator {
        ComplexOperator(-self.0)
    }
}

/// A unit-trace Hermitian operator with named basis states.
///
/// Positivity is not enforced here; perturbative constructions may produce
/// slightly negative eigenvalues and are represented as plain operators.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: ComplexOperator,
    labels: Vec<String>,
}

impl DensityMatrix {
    pub fn new(op: ComplexOperator, labels: Vec<String>) -> Result<Self> {
        if labels.len() != op.dim() {
            return Err(Error::DimensionMismatch {
                expected: op.dim(),
                actual: labels.len(),
            });
        }
        let tol = Tolerances::DEFAULT.density;
        let tr = op.trace();
        if (tr - c(1.0)).norm() > tol {
            return Err(invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        if op.hermiticity_error() > tol {
            return Err(invalid("density matrix is not Hermitian"));
        }
        Ok(Self { op, labels })
    }

    pub fn from_operator(op: ComplexOperator) -> Result<Self> {
        let labels = default_labels(op.dim());
        Self::new(op, labels)
    }

    /// `|i⟩⟨i|`
    pub fn basis_state(dim: usize, i: usize) -> Self {
        Self {
            op: ComplexOperator::projector(dim, i),
            labels: default_labels(dim),
        }
    }

    /// Normalizes `ket` and returns `|ψ⟩⟨ψ|`.
    pub fn from_ket(ket: &CVector) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(invalid("zero state vector"));
        }
        let psi = ket / c(norm);
        Self::from_operator(ComplexOperator::outer(&psi, &psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: ComplexOperator::identity(dim) * (1.0 / dim as f64),
            labels: default_labels(dim),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.op.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.op.dim(),
                actual: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn op(&self) -> &ComplexOperator {
        &self.op
    }

    pub fn into_operator(self) -> ComplexOperator {
        self.op
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn population(&self, i: usize) -> f64 {
        self.op[(i, i)].re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.op.hermitian_eigenvalues()[0]
    }
}

impl Deref for DensityMatrix {
    type Target = ComplexOperator;
    fn deref(&self) -> &ComplexOperator {
        &self.op
    }
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("|{i}>")).collect()
}

/// How a jump operator carries its rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rate {
    /// Dimensionless jump operator with a separate rate (rad/µs).
    Explicit(f64),
    /// The amplitude `√γ` is folded into the operator; the rate is one.
    Absorbed,
}

/// Where a jump goes. Indices are zero-based basis positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecayPath {
    /// Source state; `None` when the operator collects several sources.
    pub from: Option<usize>,
    pub to: usize,
    /// Intermediate (eliminated) state, if any.
    pub via: Option<usize>,
}

impl fmt::Display for DecayPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.from {
            Some(from) => write!(f, "{} -> {}", from + 1, self.to + 1)?,
            None => write!(f, "* -> {}", self.to + 1)?,
        }
        if let Some(via) = self.via {
            write!(f, " via {}", via + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LindbladTerm {
    operator: ComplexOperator,
    rate: Rate,
    path: Option<DecayPath>,
}

impl LindbladTerm {
    pub fn with_rate(operator: ComplexOperator, rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(invalid(format!(
                "rate must be finite and non-negative, got {rate}"
            )));
        }
        Ok(Self {
            operator,
            rate: Rate::Explicit(rate),
            path: None,
        })
    }

    pub fn absorbed(operator: ComplexOperator) -> Self {
        Self {
            operator,
            rate: Rate::Absorbed,
            path: None,
        }
    }

    pub fn with_path(mut self, path: DecayPath) -> Self {
        self.path = Some(path);
        self
    }

    pub fn operator(&self) -> &ComplexOperator {
        &self.operator
    }

    pub fn operator_mut(&mut self) -> &mut ComplexOperator {
        &mut self.operator
    }

    pub fn rate(&self) -> Rate {
        self.rate
    }

    pub fn path(&self) -> Option<DecayPath> {
        self.path
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    /// The multiplier in front of `D[L]`: the explicit rate, or 1.
    pub fn weight(&self) -> f64 {
        match self.rate {
            Rate::Explicit(r) => r,
            Rate::Absorbed => 1.0,
        }
    }

    /// `√weight · L`, the equivalent rate-absorbed operator.
    pub fn amplitude(&self) -> ComplexOperator {
        match self.rate {
            Rate::Explicit(r) => &self.operator * r.sqrt(),
            Rate::Absorbed => self.operator.clone(),
        }
    }
}

/// `γ (L ρ L† − ½{L†L, ρ})`
pub fn dissipator_apply(term: &LindbladTerm, rho: &ComplexOperator) -> Result<ComplexOperator> {
    rho.check_dim(term.dim())?;
    let l = term.operator();
    let ld = l.adjoint();
    let ldl = &ld * l;
    let out = &(&(l * rho) * &ld) - &(ldl.anticommutator(rho) * 0.5);
    Ok(out * term.weight())
}

/// Column-major vectorization.
pub fn vectorize(rho: &ComplexOperator) -> CVector {
    CVector::from_column_slice(rho.matrix().as_slice())
}

pub fn devectorize(v: &CVector) -> Result<ComplexOperator> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() || n == 0 {
        return Err(invalid(format!(
            "vector length {} is not a positive square",
            v.len()
        )));
    }
    Ok(ComplexOperator(CMatrix::from_column_slice(
        n,
        n,
        v.as_slice(),
    )))
}

/// A linear map on column-vectorized `d × d` operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    hilbert_dim: usize,
    m: CMatrix,
}

impl Superoperator {
    pub fn zeros(hilbert_dim: usize) -> Self {
        let n = hilbert_dim * hilbert_dim;
        Self {
            hilbert_dim,
            m: CMatrix::zeros(n, n),
        }
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(invalid("superoperator must be square"));
        }
        let d = (m.nrows() as f64).sqrt().round() as usize;
        if d * d != m.nrows() || d == 0 {
            return Err(invalid(format!(
                "superoperator size {} is not a square",
                m.nrows()
            )));
        }
        Ok(Self { hilbert_dim: d, m })
    }

    /// `ρ ↦ A ρ B`, i.e. `Bᵀ ⊗ A`.
    pub fn sandwich(a: &ComplexOperator, b: &ComplexOperator) -> Self {
        Self {
            hilbert_dim: a.dim(),
            m: b.matrix().transpose().kronecker(a.matrix()),
        }
    }

    /// `ρ ↦ −i[H, ρ]`
    pub fn hamiltonian_part(h: &ComplexOperator) -> Self {
        let id = ComplexOperator::identity(h.dim());
        let left = Self::sandwich(h, &id);
        let right = Self::sandwich(&id, h);
        Self {
            hilbert_dim: h.dim(),
            m: (left.m - right.m) * (-IM),
        }
    }

    /// `ρ ↦ γ D[L](ρ)`
    pub fn dissipator(term: &LindbladTerm) -> Self {
        let a = term.amplitude();
        Self::cross_dissipator(&a, &a) * 0.5
    }

    /// `ρ ↦ A ρ B† + B ρ A† − ½{A†B + B†A, ρ}`.
    ///
    /// With `A = B = L` this is twice the ordinary dissipator.
    pub fn cross_dissipator(a: &ComplexOperator, b: &ComplexOperator) -> Self {
        let ad = a.adjoint();
        let bd = b.adjoint();
        let id = ComplexOperator::identity(a.dim());
        let k = &(&ad * b) + &(&bd * a);
        let m = Self::sandwich(a, &bd).m + Self::sandwich(b, &ad).m
            - (Self::sandwich(&k, &id).m + Self::sandwich(&id, &k).m) * c(0.5);
        Self {
            hilbert_dim: a.dim(),
            m,
        }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// Side length `d²` of the matrix.
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|z| *z == C64::default())
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply_vec(&self, v: &CVector) -> CVector {
        &self.m * v
    }

    pub fn apply(&self, rho: &ComplexOperator) -> Result<ComplexOperator> {
        rho.check_dim(self.hilbert_dim)?;
        devectorize(&(&self.m * vectorize(rho)))
    }

    /// `max |vec(I)† L|`, relative to `max(1, max|L|)`.
    pub fn trace_defect(&self) -> f64 {
        let d = self.hilbert_dim;
        let mut worst = 0.0f64;
        for col in 0..self.dim() {
            let s: C64 = (0..d).map(|i| self.m[(i * d + i, col)]).sum();
            worst = worst.max(s.norm());
        }
        worst / self.max_abs().max(1.0)
    }
}

impl Add<&Superoperator> for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            m: &self.m + &rhs.m,
        }
    }
}

impl Add for Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: Superoperator) -> Superoperator {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            m: self.m + rhs.m,
        }
    }
}

impl AddAssign<&Superoperator> for Superoperator {
    fn add_assign(&mut self, rhs: &Superoperator) {
        self.m += &rhs.m;
    }
}

impl Sub<&Superoperator> for &Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            m: &self.m - &rhs.m,
        }
    }
}

impl Mul<f64> for Superoperator {
    type Output = Superoperator;
    fn mul(self, x: f64) -> Superoperator {
        Superoperator {
            hilbert_dim: self.hilbert_dim,
            m: self.m * c(x),
        }
    }
}

/// Builds the generator of `dρ/dt = −i[H, ρ] + Σ γ_k D[L_k](ρ)`.
pub fn liouvillian(h: &ComplexOperator, terms: &[LindbladTerm]) -> Result<Superoperator> {
    if !h.is_hermitian(Tolerances::DEFAULT.hermitian) {
        return Err(invalid("Hamiltonian is not Hermitian"));
    }
    let mut out = Superoperator::hamiltonian_part(h);
    for t in terms {
        t.operator().check_dim(h.dim())?;
        out += &Superoperator::dissipator(t);
    }
    Ok(out)
}

/// `exp(−iA)` for Hermitian `A`, via eigendecomposition.
pub fn unitary_exp(a: &ComplexOperator) -> Result<ComplexOperator> {
    if !a.is_hermitian(Tolerances::DEFAULT.hermitian) {
        return Err(invalid("generator of unitary_exp is not Hermitian"));
    }
    let eig = a.hermitian_part().0.symmetric_eigen();
    let u = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        a.dim(),
        eig.eigenvalues.iter().map(|&l| (-IM * l).exp()),
    ));
    Ok(ComplexOperator(u * phases * u.adjoint()))
}

/// A Hamiltonian together with its jump operators.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterEquation {
    pub hamiltonian: ComplexOperator,
    pub terms: Vec<LindbladTerm>,
}

impl MasterEquation {
    pub fn new(hamiltonian: ComplexOperator, terms: Vec<LindbladTerm>) -> Result<Self> {
        for t in &terms {
            t.operator().check_dim(hamiltonian.dim())?;
        }
        Ok(Self { hamiltonian, terms })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn liouvillian(&self) -> Result<Superoperator> {
        liouvillian(&self.hamiltonian, &self.terms)
    }

    /// Right-hand side evaluated directly on `ρ`, without vectorization.
    pub fn rhs(&self, rho: &ComplexOperator) -> Result<ComplexOperator> {
        rho.check_dim(self.dim())?;
        let mut out = self.hamiltonian.commutator(rho) * (-IM);
        for t in &self.terms {
            out += &dissipator_apply(t, rho)?;
        }
        Ok(out)
    }
}
