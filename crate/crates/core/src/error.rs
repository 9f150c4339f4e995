use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("matrix dimension {0} is odd; expected a 2d x 2d phase-space matrix")]
    OddDimension(usize),

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigenvalue iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("linear system is singular to working precision")]
    Singular,

    #[error("Lyapunov residual {residual:e} exceeds bound {bound:e}")]
    LyapunovResidual { residual: f64, bound: f64 },

    #[error("polynomial leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("polynomial degree {0} is outside the supported range 1..=4")]
    UnsupportedDegree(usize),

    #[error("quadrature horizon exceeded {0} before the tail bound was met")]
    HorizonExceeded(f64),

    #[error("drift matrix is not stable: no stationary state")]
    NoStationaryState { eigenvalues: Vec<Complex64> },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameters outside the region where the formula applies: {0}")]
    OutsideRegion(String),

    #[error("mode index {index} out of range for {modes} modes")]
    IndexOutOfRange { index: usize, modes: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("construction paths disagree at ({row}, {col}): {left} vs {right}")]
    ConstructionMismatch {
        row: usize,
        col: usize,
        left: f64,
        right: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
