//! Periodic grid, spectral transforms, Fourier multipliers and norms.
//!
//! Every other module works on [`RealField`] / [`Spectrum`] values built here. All
//! types are immutable once constructed and the operations are pure.

mod field;
mod grid;
pub mod inequalities;
pub mod norms;
pub mod ops;
mod random;

use thiserror::Error;

pub use field::{RealField, Spectrum, MEAN_ZERO_RTOL};
pub use grid::Grid;
pub use random::{mode_draw, random_band_spectrum};
pub use inequalities::{inequality_ratios, RatioMaxima, RatioReport, RatioSettings};
pub use norms::{dot_norm, l2_norm, lp_norm, sobolev_norm, sobolev_norm_sq, x_norm, x_norm_spectrum};
pub use ops::{
    dealias, derivative, forward, frac_laplacian, inv_frac_laplacian, inverse, semigroup,
    semigroup_symbol,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("length {found} does not match grid size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("fields live on different grids: {left:?} vs {right:?}")]
    GridMismatch { left: (usize, f64), right: (usize, f64) },
    #[error("mode {0} is not representable on this grid")]
    ModeOffGrid(i64),
    #[error("negative order {0}; use inv_frac_laplacian")]
    NegativeOrder(f64),
    #[error("invalid operator order {0}")]
    InvalidOrder(f64),
    #[error("field has nonzero mean {mean:e}")]
    MeanNotZero { mean: f64 },
    #[error("semigroup time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("Lebesgue exponent must lie in [1, ∞], got {0}")]
    InvalidExponent(f64),
    #[error("{0}")]
    InvalidParameter(String),
}
