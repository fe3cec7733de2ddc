use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QdsError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("map does not preserve Hermiticity (relative defect {defect:.3e})")]
    NotHermiticityPreserving { defect: f64 },

    #[error("map does not annihilate traces (worst |tr L(F)| = {defect:.3e})")]
    NotTraceAnnihilating { defect: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("form invariant violated: {0}")]
    InvariantViolation(String),

    #[error("class {0} cannot be sampled at n = {1}")]
    UnsatisfiableClass(String, usize),

    #[error("time list is not ascending and nonnegative")]
    UnsortedTimes,

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("resolvent is singular at lambda = {0}")]
    SingularResolvent(f64),

    #[error("lambda = {lambda} does not exceed the generator norm bound {bound}")]
    LambdaTooSmall { lambda: f64, bound: f64 },

    #[error("step t/n = {step} too large: step * norm = {product} >= 1")]
    StepTooLarge { step: f64, product: f64 },
}

pub type Result<T> = std::result::Result<T, QdsError>;
