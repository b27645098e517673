use serde::Serialize;

use super::AnalysisError;
use crate::evolution::{integrate_linear, Trajectory};
use crate::params::Params;
use crate::spectral::{forward, l2_norm, x_norm_spectrum, Grid, RealField};

/// Relative slack on the decay bound column.
pub const DECAY_SLACK: f64 = 1e-6;

/// Least-squares fits need at least this many samples in the window.
pub const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub t: f64,
    pub l2: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayWindow {
    pub t_a: f64,
    pub t_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub samples: Vec<DecayRow>,
    /// Fitted `γ` in `‖u‖ ∼ (1+t)^{-γ}`; absent when the solution vanishes.
    pub fit_exponent: Option<f64>,
    /// The window actually used, after capping `t_b`.
    pub window: DecayWindow,
    pub fit_points: usize,
    /// `3/(2α) − ε/2`
    pub predicted_exponent: f64,
}

impl DecayReport {
    pub fn all_ok(&self) -> bool {
        self.samples.iter().all(|r| r.ok)
    }
}

/// `√((12−2αε)/(αε))`.
pub fn decay_bound_constant(p: &Params) -> f64 {
    let ae = p.alpha * p.eps;
    ((12.0 - 2.0 * ae) / ae).sqrt()
}

/// Latest time `0.5 (π/L)^{-α}` at which the torus still looks like the line.
pub fn window_cap(grid: &Grid, alpha: f64) -> f64 {
    0.5 * grid.k_min().powf(-alpha)
}

/// Run the frozen-coefficient equation from `f` and compare `‖u(t)‖` with the
/// algebraic bound. `window.t_b` is clamped to [`window_cap`].
pub fn decay_experiment(
    v: &RealField,
    f: &RealField,
    p: &Params,
    window: DecayWindow,
    stride: usize,
) -> Result<(DecayReport, Trajectory), AnalysisError> {
    p.validate_scheme()?;
    let fs = forward(f);
    let (traj, _) = integrate_linear(&forward(v), &fs, p, stride)?;
    let f_x = x_norm_spectrum(&fs, p.alpha)?;
    let constant = decay_bound_constant(p);
    let gamma = p.decay_exponent();

    let samples: Vec<DecayRow> = traj
        .samples()
        .iter()
        .map(|s| {
            let l2 = l2_norm(&s.u);
            let bound = constant * f_x * (1.0 + s.t).powf(-gamma);
            DecayRow {
                t: s.t,
                l2,
                bound,
                ok: l2 <= bound * (1.0 + DECAY_SLACK),
            }
        })
        .collect();

    let window = DecayWindow {
        t_a: window.t_a,
        t_b: window.t_b.min(window_cap(f.grid(), p.alpha)),
    };
    let fit: Vec<DecayRow> = samples
        .iter()
        .filter(|r| r.t >= window.t_a && r.t <= window.t_b)
        .copied()
        .collect();
    if fit.len() < MIN_FIT_POINTS {
        return Err(AnalysisError::WindowTooShort {
            t_a: window.t_a,
            t_b: window.t_b,
            points: fit.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let fit_exponent = if fit.iter().all(|r| r.l2 > 0.0) {
        let xs: Vec<f64> = fit.iter().map(|r| (1.0 + r.t).ln()).collect();
        let ys: Vec<f64> = fit.iter().map(|r| r.l2.ln()).collect();
        Some(-slope(&xs, &ys))
    } else {
        None
    };
    Ok((
        DecayReport {
            samples,
            fit_exponent,
            window,
            fit_points: fit.len(),
            predicted_exponent: gamma,
        },
        traj,
    ))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitRow {
    pub t: f64,
    pub g: f64,
    pub low_energy: f64,
    pub high_energy: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitDiagnostic {
    pub rows: Vec<SplitRow>,
}

impl SplitDiagnostic {
    /// Largest `|low + high − total| / total` over the rows.
    pub fn partition_defect(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.total > 0.0)
            .map(|r| (r.low_energy + r.high_energy - r.total).abs() / r.total)
            .fold(0.0, f64::max)
    }
}

/// `g(t) = (3m / (4(1+t)))^{1/α}` with `m = 3/α − ε`.
pub fn splitting_radius(t: f64, p: &Params) -> f64 {
    let m = 3.0 / p.alpha - p.eps;
    (3.0 * m / (4.0 * (1.0 + t))).powf(1.0 / p.alpha)
}

/// Split the energy of every sample across the moving ball `|k| ≤ g(t)`.
pub fn split_diagnostic(traj: &Trajectory, p: &Params) -> SplitDiagnostic {
    let rows = traj
        .samples()
        .iter()
        .map(|s| {
            let g = splitting_radius(s.t, p);
            let len = s.u.grid().length();
            let (mut low, mut high) = (0.0, 0.0);
            for (c, &k) in s.u.coeffs().iter().zip(s.u.grid().wavenumbers()) {
                let e = c.norm_sqr() * len;
                if k.abs() <= g {
                    low += e;
                } else {
                    high += e;
                }
            }
            let total = l2_norm(&s.u).powi(2);
            SplitRow {
                t: s.t,
                g,
                low_energy: low,
                high_energy: high,
                total,
            }
        })
        .collect();
    SplitDiagnostic { rows }
}
