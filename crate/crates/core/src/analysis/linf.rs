use serde::Serialize;

use super::AnalysisError;
use crate::evolution::Trajectory;
use crate::spectral::{dot_norm, forward, inverse, l2_norm, sobolev_norm, RealField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinfRow {
    pub t: f64,
    pub linf: f64,
    /// `‖u₀‖ t^{-1/2} + ‖f‖_{Ḣ^{-α/2}} + ‖f‖^{1/3}_{L²}`
    pub scale: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinfReport {
    pub rows: Vec<LinfRow>,
    /// Empirical implicit constant.
    pub max_ratio: f64,
}

/// Ratio of `‖u(t)‖_{L∞}` to the right-hand side of the smoothing bound at every
/// sample with `t > 0`.
pub fn linf_bound_check(
    traj: &Trajectory,
    u0: &RealField,
    f: &RealField,
    alpha: f64,
) -> Result<LinfReport, AnalysisError> {
    let fs = forward(f);
    let u0_l2 = l2_norm(&forward(u0));
    let f_neg = sobolev_norm(&fs, -alpha / 2.0, true)?;
    let f_l2 = dot_norm(&fs, 0.0)?;
    let rows: Vec<LinfRow> = traj
        .samples()
        .iter()
        .filter(|s| s.t > 0.0)
        .map(|s| {
            let linf = inverse(&s.u).max_abs();
            let scale = u0_l2 / s.t.sqrt() + f_neg + f_l2.cbrt();
            let ratio = if linf == 0.0 { 0.0 } else { linf / scale };
            LinfRow {
                t: s.t,
                linf,
                scale,
                ratio,
            }
        })
        .collect();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(LinfReport { rows, max_ratio })
}
