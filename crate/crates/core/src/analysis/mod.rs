//! Experiments built on the solvers: algebraic decay with the Fourier-splitting
//! diagnostic, nonlinear stability of steady states, and De Giorgi level-set
//! energies with the resulting `L∞` bound.

mod decay;
mod level_set;
mod linf;
mod stability;

use thiserror::Error;

pub use decay::{
    decay_bound_constant, decay_experiment, split_diagnostic, splitting_radius, window_cap,
    DecayReport, DecayRow, DecayWindow, SplitDiagnostic, SplitRow, DECAY_SLACK,
};
pub use level_set::{
    cordoba_check, fit_threshold_constant, level_set_energy, threshold_scaling, truncate,
    CordobaPair, LevelRow, LevelSetReport, PairCheck, Side, MIN_WINDOW_SAMPLES,
};
pub use linf::{linf_bound_check, LinfReport, LinfRow};
pub use stability::{stability_experiment, StabilityReport, StabilityRow, MONOTONE_TOL};

use crate::evolution::EvolutionError;
use crate::params::ParamsError;
use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("fit window [{t_a}, {t_b}] holds {points} samples; at least {needed} are needed")]
    WindowTooShort {
        t_a: f64,
        t_b: f64,
        points: usize,
        needed: usize,
    },
    #[error("only {samples} samples in [{from}, {to}]; at least {needed} are needed")]
    StrideTooCoarse {
        from: f64,
        to: f64,
        samples: usize,
        needed: usize,
    },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}
