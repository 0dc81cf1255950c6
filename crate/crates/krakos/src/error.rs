use thiserror::Error;

/// Errors for gate-strength computations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix dimensions do not match the declared bipartition: {0}")]
    InvalidBipartition(String),

    #[error("matrix is not Hermitian (asymmetry {residual:.3e} exceeds {tolerance:.1e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("matrix is not a density operator: trace {trace:.12} differs from 1")]
    NotAState { trace: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("matrix is not unitary (residual {residual:.3e} exceeds {tolerance:.1e})")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("affine map has no unique fixed point (I - linear is singular)")]
    NoFixedPoint,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
