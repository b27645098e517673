//! Pseudospectral laboratory for the forced fractal Burgers equation
//! `u_t + u u_x + Λ^α u = f` on a periodic interval `[-L, L)`.

pub mod analysis;
pub mod evolution;
pub mod params;
pub mod runner;
pub mod spectral;
pub mod steady;

pub use params::{Params, ParamsError};
