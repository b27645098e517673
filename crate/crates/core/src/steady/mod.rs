//! Steady states of `½(U²)_x + Λ^α U = f`: the smallness gate, the linearised
//! Picard scheme `½(U^i U^{i+1})_x + Λ^α U^{i+1} = f`, and the time-integral
//! construction of the linear solve.

mod gate;
mod linear;
mod picard;
mod probe;
mod time_integral;

use thiserror::Error;

pub use gate::{
    smallness_constant, smallness_gate, smallness_gate_spectrum, SmallnessReport, GATE_THRESHOLD,
};
pub use linear::{linear_residual, linear_steady_solve, linear_steady_solve_from};
pub use picard::{
    nonlinear_residual, picard_solve, picard_solve_from, IterationTrace, TraceRow, BOUND_RTOL,
};
pub use probe::{uniqueness_probe, ProbeOutcome, UniquenessReport};
pub use time_integral::{steady_via_time_integral, TimeIntegralReport};

use crate::evolution::EvolutionError;
use crate::params::ParamsError;
use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SteadyError {
    #[error("inner solve diverged: increment grew three times in a row (last {increment:e})")]
    Divergence { iterations: usize, increment: f64 },
    #[error("inner solve stopped after {iterations} iterations at residual {residual:e}")]
    InnerNotConverged { iterations: usize, residual: f64 },
    #[error("Picard iteration is not contracting (ratio {ratio} after {iterations} iterations); the smallness gate is likely violated")]
    NonContraction { iterations: usize, ratio: f64 },
    #[error("Picard iteration stopped after {iterations} iterations with increment {increment:e}")]
    NotConverged { iterations: usize, increment: f64 },
    #[error("time integral tail {increment:e} above tolerance at the horizon t = {t}")]
    TailNotConverged { t: f64, increment: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

fn check_tol(tol: f64) -> Result<(), SteadyError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(SteadyError::InvalidTolerance(tol))
    }
}
