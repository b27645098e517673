use std::ops::ControlFlow;

use serde::Serialize;

use super::AnalysisError;
use crate::evolution::{drive, ForcedBurgers, LEDGER_RTOL};
use crate::params::Params;
use crate::spectral::{sobolev_norm, sobolev_norm_sq, Spectrum};

/// Allowed per-step growth of `‖w‖_{L²}`.
pub const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityRow {
    pub t: f64,
    /// `‖w(t)‖²`
    pub w_l2_sq: f64,
    /// `∫₀^t ‖Λ^{α/2}w‖² ds`
    pub diss_acc: f64,
    /// `‖w‖² + (2/3)·diss_acc`
    pub lhs: f64,
    /// `‖θ‖²`
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
    pub theta_l2: f64,
    pub final_w_l2: f64,
    /// `‖w(T)‖ / ‖θ‖`, zero when `θ = 0`.
    pub final_ratio: f64,
    /// Largest one-step increase of `‖w‖_{L²}` (negative when strictly decreasing).
    pub max_step_growth: f64,
    pub monotone: bool,
    /// `‖U‖_{H^{α/2}}`; the experiment assumes it is at most 1/3.
    pub steady_h_half: f64,
}

impl StabilityReport {
    pub fn ledger_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn steady_small(&self) -> bool {
        self.steady_h_half <= 1.0 / 3.0
    }
}

/// Evolve `u₀ = U + θ` under the forced equation and track `w = u − U`.
///
/// Every step is checked for monotonicity of `‖w‖`; ledger rows are recorded
/// every `stride` steps and at the horizon `p.t_end`.
pub fn stability_experiment(
    steady: &Spectrum,
    theta: &Spectrum,
    f: &Spectrum,
    p: &Params,
    stride: usize,
) -> Result<StabilityReport, AnalysisError> {
    p.validate()?;
    if stride == 0 {
        return Err(AnalysisError::InvalidArgument("stride must be at least 1".into()));
    }
    steady.grid().ensure_same(theta.grid())?;
    steady.grid().ensure_same(f.grid())?;
    let alpha = p.alpha;
    let theta_sq = sobolev_norm_sq(theta, 0.0, false)?;
    let diss = |w: &Spectrum| sobolev_norm_sq(w, alpha / 2.0, true).unwrap_or(f64::NAN);

    let mut rows = Vec::new();
    let row = |t: f64, w_sq: f64, acc: f64| {
        let lhs = w_sq + 2.0 / 3.0 * acc;
        StabilityRow {
            t,
            w_l2_sq: w_sq,
            diss_acc: acc,
            lhs,
            bound: theta_sq,
            ok: lhs <= theta_sq * (1.0 + LEDGER_RTOL),
        }
    };
    rows.push(row(0.0, theta_sq, 0.0));

    let u0 = steady.add(theta)?;
    let rhs = ForcedBurgers::new(f.clone());
    let mut acc = 0.0;
    let mut last_diss = diss(theta);
    let mut last_norm = theta_sq.sqrt();
    let mut max_step_growth = f64::NEG_INFINITY;
    let horizon = p.t_end;
    drive(&u0, &rhs, p, horizon, |info| {
        let w = info.u.sub(steady).expect("same grid");
        let w_sq = sobolev_norm_sq(&w, 0.0, false).unwrap_or(f64::NAN);
        let d = diss(&w);
        acc += 0.5 * info.h * (last_diss + d);
        last_diss = d;
        let norm = w_sq.sqrt();
        max_step_growth = max_step_growth.max(norm - last_norm);
        last_norm = norm;
        if info.index % stride == 0 || info.t >= horizon {
            rows.push(row(info.t, w_sq, acc));
        }
        ControlFlow::Continue(())
    })?;

    let theta_l2 = theta_sq.sqrt();
    Ok(StabilityReport {
        rows,
        theta_l2,
        final_w_l2: last_norm,
        final_ratio: if theta_l2 > 0.0 { last_norm / theta_l2 } else { 0.0 },
        max_step_growth,
        monotone: max_step_growth <= MONOTONE_TOL,
        steady_h_half: sobolev_norm(steady, alpha / 2.0, false)?,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{l2_norm, random_band_spectrum, x_norm_spectrum, Grid};
    use crate::steady::{picard_solve_from, smallness_constant};

    fn params(t_end: f64) -> Params {
        Params {
            alpha: 1.2,
            eps: 0.1,
            rho: 1.0,
            nu: 0.0,
            dt: 0.02,
            t_end,
        }
    }

    fn steady_pair(g: &Grid, seed: u64) -> (Spectrum, Spectrum) {
        let p = params(1.0);
        let raw = random_band_spectrum(g, seed, 1.0, 6.0).unwrap();
        let f = raw.scaled(
            0.5 / 3.0 * p.eps / smallness_constant(&p).unwrap() / x_norm_spectrum(&raw, 1.2).unwrap(),
        );
        let (u, _) = picard_solve_from(&f, &Spectrum::zeros(g), &p, 1e-14, 40).unwrap();
        (u, f)
    }

    #[test]
    fn zero_perturbation_stays_at_the_steady_state() {
        let g = Grid::two_pi(64).unwrap();
        let (u, f) = steady_pair(&g, 3);
        let r = stability_experiment(&u, &Spectrum::zeros(&g), &f, &params(5.0), 10).unwrap();
        assert!(r.final_w_l2 <= 1e-9, "drift {}", r.final_w_l2);
        assert!(r.steady_small());
    }

    #[test]
    fn perturbation_decays_monotonically_within_ledger() {
        let g = Grid::two_pi(64).unwrap();
        let (u, f) = steady_pair(&g, 4);
        let theta = random_band_spectrum(&g, 5, 1.0, 6.0).unwrap();
        let theta = theta.scaled(0.1 * l2_norm(&u) / l2_norm(&theta));
        let r = stability_experiment(&u, &theta, &f, &params(10.0), 25).unwrap();
        assert!(r.ledger_ok());
        assert!(r.monotone, "growth {}", r.max_step_growth);
        assert!(r.final_ratio <= 1e-3, "ratio {}", r.final_ratio);
        assert_eq!(r.rows.last().unwrap().t, 10.0);
    }
}
