use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |h - h^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Hermitian eigensolver failed to converge for a {dim}x{dim} matrix")]
    ConvergenceFailure { dim: usize },

    #[error("matrix has eigenvalue {eigenvalue:e} below the PSD tolerance")]
    NegativeSpectrum { eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid inverse temperature beta = {0}")]
    InvalidBeta(f64),

    #[error("degenerate denominator: |<X_A>| = {value:e} is below the guard threshold")]
    DegenerateDenominator { value: f64 },

    #[error("invalid Pauli string: {0}")]
    InvalidPauliString(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
}
