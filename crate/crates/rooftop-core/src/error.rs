//! Shared error type for grid-level failures.

use alloc::string::String;
use core::fmt;

/// Errors produced by field construction and the grid operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An axis was constructed with `min >= max`, fewer than two nodes,
    /// or a spacing too small to keep nodes strictly increasing.
    InvalidAxis(String),
    /// The number of values does not match the product of axis lengths.
    LengthMismatch { expected: usize, got: usize },
    /// A value is NaN or infinite.
    NonFinite { index: usize },
    /// The operation requires a field of a different dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Two fields that must share axes exactly do not.
    GridMismatch,
    /// An axis has too few nodes for the requested stencil.
    GridTooCoarse { needed: usize, got: usize },
    /// A scalar argument is outside its admissible range.
    InvalidParameter(String),
    /// The sigma window does not cover the required range.
    SigmaWindowTooSmall { required_min: f64, required_max: f64 },
    /// An iterative envelope computation did not reach its tolerance.
    NoConvergence { residual: f64, sweeps: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidAxis(msg) => write!(f, "invalid axis: {msg}"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "value buffer has {got} entries, grid has {expected} nodes")
            }
            Error::NonFinite { index } => {
                write!(f, "non-finite value at flat index {index}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "expected a {expected}-d field, got {got}-d")
            }
            Error::GridMismatch => write!(f, "fields do not share axes"),
            Error::GridTooCoarse { needed, got } => {
                write!(f, "axis has {got} nodes, stencil needs at least {needed}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SigmaWindowTooSmall { required_min, required_max } => {
                write!(
                    f,
                    "sigma axis must cover [{required_min}, {required_max}]"
                )
            }
            Error::NoConvergence { residual, sweeps } => {
                write!(f, "no convergence after {sweeps} sweeps, residual {residual:e}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
