use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A projected non-Hermitian propagator `(H_NH - eps_k)` could not be inverted.
    #[error("projected non-Hermitian Hamiltonian is singular for ground state index {k}")]
    NumericalSingularity { k: usize },

    #[error("integration failed to reach tolerance {requested:e} (achieved {achieved:e})")]
    Integration { requested: f64, achieved: f64 },

    #[error("steady state is not unique (null multiplicity {multiplicity})")]
    NonUniqueSteadyState { multiplicity: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
