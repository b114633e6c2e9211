use thiserror::Error;

use crate::commutator::Inertia;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not complex symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not antisymmetric (relative residual {0:.3e})")]
    NotAntisymmetric(f64),
    #[error("matrix has nonzero imaginary parts")]
    NotReal,
    #[error("input matrix is not normal (relative residual {0:.3e})")]
    NotNormalInput(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("the zero matrix has no unitary defect")]
    ZeroMatrix,
    #[error("rank condition fails: commutator inertia is {0}")]
    RankConditionFailed(Inertia),
    #[error("refined basis construction is numerically ill-conditioned")]
    DegenerateSpan,
    #[error("phase must have unit modulus, got |mu| = {0}")]
    InvalidPhase(f64),
    #[error("A*A - AA* differs from xx* - yy* (residual {0:.3e})")]
    FactorizationMismatch(f64),
    #[error("witness vectors x and y are linearly dependent")]
    DependentWitness,
    #[error("no solution pair exists: the matrix does not have normal defect one")]
    Infeasible,
    #[error("solution pair does not satisfy the completion equations (residual {0:.3e})")]
    SolutionInvalid(f64),
    #[error("non-normality guard failed after {0} attempts")]
    GuardFailed(usize),
    #[error("real structured generation requires even n, got {0}")]
    OddSize(usize),
    #[error("A-block is not positive definite (smallest eigenvalue {0:.3e})")]
    SingularA(f64),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
