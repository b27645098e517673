use num_complex::Complex64;
use serde::Serialize;

use super::gate::smallness_gate_spectrum;
use super::linear::{dual_norm, energy_norm, lambda, linear_steady_solve_from, pinned_mean_zero};
use super::{check_tol, SteadyError};
use crate::evolution::nonlinear_flux;
use crate::params::Params;
use crate::spectral::{forward, inverse, sobolev_norm, RealField, Spectrum};

/// Relative slack on the a priori iterate bound.
pub const BOUND_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub i: usize,
    /// `‖Λ^{α/2}(U^{i+1} − U^i)‖`
    pub increment_norm: f64,
    /// Quotient of consecutive increments; absent on the first row or after a
    /// zero increment.
    pub ratio: Option<f64>,
    /// Nonlinear residual of `U^{i+1}` in `Ḣ^{-α/2}`.
    pub residual: f64,
    /// `‖U^{i+1}‖_{H^{α/2}}`
    pub h_half_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub rows: Vec<TraceRow>,
    /// `C ε^{-1} ‖f‖_X`
    pub bound: f64,
}

impl IterationTrace {
    /// Every iterate obeys the `H^{α/2}` bound up to [`BOUND_RTOL`].
    pub fn within_bound(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.h_half_norm <= self.bound * (1.0 + BOUND_RTOL))
    }

    /// Largest ratio over rows with `i ≥ from`.
    pub fn max_ratio_from(&self, from: usize) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.i >= from)
            .filter_map(|r| r.ratio)
            .reduce(f64::max)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.rows.last().map(|r| r.residual)
    }

    pub fn iterations(&self) -> usize {
        self.rows.len()
    }
}

/// `‖½(U²)_x + Λ^α U − f‖_{Ḣ^{-α/2}}`.
pub fn nonlinear_residual(u: &Spectrum, f: &Spectrum, alpha: f64) -> Result<f64, SteadyError> {
    let f = pinned_mean_zero(f)?;
    Ok(residual_pinned(u, &f, alpha))
}

fn residual_pinned(u: &Spectrum, f: &Spectrum, alpha: f64) -> f64 {
    let mut r = lambda(u, alpha);
    let flux = nonlinear_flux(u);
    for ((c, fc), nc) in r.coeffs_mut().iter_mut().zip(f.coeffs()).zip(flux.coeffs()) {
        *c -= fc + nc;
    }
    dual_norm(&r, alpha)
}

/// Picard iteration from `U⁰ = 0` until the increment drops to `tol`.
pub fn picard_solve(
    f: &RealField,
    p: &Params,
    tol: f64,
    max_iter: usize,
) -> Result<(RealField, IterationTrace), SteadyError> {
    let fs = forward(f);
    let (u, trace) = picard_solve_from(&fs, &Spectrum::zeros(f.grid()), p, tol, max_iter)?;
    Ok((inverse(&u), trace))
}

/// Picard iteration from an arbitrary seed `U⁰`.
pub fn picard_solve_from(
    f: &Spectrum,
    u0: &Spectrum,
    p: &Params,
    tol: f64,
    max_iter: usize,
) -> Result<(Spectrum, IterationTrace), SteadyError> {
    check_tol(tol)?;
    f.grid().ensure_same(u0.grid())?;
    let gate = smallness_gate_spectrum(f, p)?;
    let f = pinned_mean_zero(f)?;
    let alpha = p.alpha;
    // The inner error must sit well below the outer increments, or the ratio
    // column turns into noise.
    let floor = 1e2 * f64::EPSILON * dual_norm(&f, alpha);
    let inner_tol = (1e-3 * tol).max(floor).max(f64::MIN_POSITIVE);

    let mut trace = IterationTrace {
        rows: Vec::new(),
        bound: gate.iterate_bound(p.eps),
    };
    let mut u = u0.clone();
    u.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    let mut prev_inc: Option<f64> = None;
    for i in 0..max_iter {
        let (next, _) = linear_steady_solve_from(&u, &f, &u, alpha, inner_tol)?;
        let increment_norm = energy_norm(&next.sub(&u)?, alpha);
        let ratio = prev_inc.filter(|&d| d > 0.0).map(|d| increment_norm / d);
        trace.rows.push(TraceRow {
            i,
            increment_norm,
            ratio,
            residual: residual_pinned(&next, &f, alpha),
            h_half_norm: sobolev_norm(&next, alpha / 2.0, false)?,
        });
        u = next;
        if increment_norm <= tol {
            return Ok((u, trace));
        }
        prev_inc = Some(increment_norm);
    }
    let last = trace.rows.last();
    let increment = last.map_or(f64::INFINITY, |r| r.increment_norm);
    match last.and_then(|r| r.ratio) {
        Some(ratio) if ratio > 0.9 => Err(SteadyError::NonContraction {
            iterations: max_iter,
            ratio,
        }),
        _ => Err(SteadyError::NotConverged {
            iterations: max_iter,
            increment,
        }),
    }
}
