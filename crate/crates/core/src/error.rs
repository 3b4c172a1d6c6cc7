use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Each variant maps to a stable identifier through [`Error::code`], which the
/// command-line front end prints on standard error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {row} sums to {sum}, which deviates from 1 by more than {tol}")]
    RowSum { row: usize, sum: f64, tol: f64 },

    #[error("entry ({row}, {col}) = {value} is negative beyond tolerance")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("row {row} has no strictly positive entry")]
    ZeroRow { row: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("chain is not irreducible")]
    NotIrreducible,

    #[error("zero patterns differ at ({row}, {col})")]
    PatternMismatch { row: usize, col: usize },

    #[error("{method} did not converge: {detail}")]
    Convergence { method: &'static str, detail: String },

    #[error("detailed-balance defect {defect} exceeds tolerance {tol}")]
    NotReversible { defect: f64, tol: f64 },

    #[error("stationary residual {residual} exceeds tolerance {tol}")]
    StationaryResidual { residual: f64, tol: f64 },

    #[error("stationary distribution has zero component {index}")]
    ZeroStationary { index: usize },

    #[error("matrix is not symmetric: asymmetry {asymmetry} exceeds {tol}")]
    NotSymmetric { asymmetry: f64, tol: f64 },

    #[error("component {index} is zero")]
    ZeroComponent { index: usize },

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("second eigenvalue modulus is 1, convergence rate is undefined")]
    Periodic,

    #[error("spectrum is not real and non-negative: max |imag| {max_imag}, min real {min_real}")]
    SpectrumNotPositive { max_imag: f64, min_real: f64 },

    #[error("no eigenvalue within {tol} of 1 (closest is at distance {distance})")]
    NonStochasticDrift { distance: f64, tol: f64 },

    #[error("component {index} = {value} is not strictly positive")]
    NotPositive { index: usize, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RowSum { .. } => "RowSumError",
            Error::NegativeEntry { .. } => "NegativeEntryError",
            Error::NonFinite { .. } => "NonFiniteError",
            Error::ZeroRow { .. } => "ZeroRowError",
            Error::Dimension(_) => "DimensionError",
            Error::NotSquare { .. } => "NotSquareError",
            Error::NotIrreducible => "NotIrreducibleError",
            Error::PatternMismatch { .. } => "PatternMismatchError",
            Error::Convergence { .. } => "ConvergenceError",
            Error::NotReversible { .. } => "NotReversibleError",
            Error::StationaryResidual { .. } => "StationaryResidualError",
            Error::ZeroStationary { .. } => "ZeroStationaryError",
            Error::NotSymmetric { .. } => "NotSymmetricError",
            Error::ZeroComponent { .. } => "ZeroComponentError",
            Error::LengthMismatch { .. } => "LengthMismatchError",
            Error::Periodic => "PeriodicError",
            Error::SpectrumNotPositive { .. } => "SpectrumNotPositiveError",
            Error::NonStochasticDrift { .. } => "NonStochasticDriftError",
            Error::NotPositive { .. } => "NotPositiveError",
            Error::InvalidArgument(_) => "InvalidArgumentError",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
