use serde::Serialize;

use crate::params::{Params, ParamsError};
use super::SteadyError;
use crate::spectral::{forward, x_norm_spectrum, RealField, Spectrum};

/// The gate passes when `C ε^{-1} ‖f‖_X` is at most this value.
pub const GATE_THRESHOLD: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallnessReport {
    pub c_alpha_eps: f64,
    pub f_x_norm: f64,
    pub gate_value: f64,
    pub passed: bool,
}

impl SmallnessReport {
    /// `C ε^{-1} ‖f‖_X`, the a priori `H^{α/2}` bound on every Picard iterate.
    pub fn iterate_bound(&self, eps: f64) -> f64 {
        self.c_alpha_eps / eps * self.f_x_norm
    }
}

/// `C(α, ε) = max{3ε, 4√(αε(12−2αε)) / (3−2α−αε)}`.
pub fn smallness_constant(p: &Params) -> Result<f64, ParamsError> {
    p.validate_scheme()?;
    let (a, e) = (p.alpha, p.eps);
    let ae = a * e;
    let second = 4.0 * (ae * (12.0 - 2.0 * ae)).sqrt() / (3.0 - 2.0 * a - ae);
    Ok((3.0 * e).max(second))
}

pub fn smallness_gate(f: &RealField, p: &Params) -> Result<SmallnessReport, SteadyError> {
    smallness_gate_spectrum(&forward(f), p)
}

pub fn smallness_gate_spectrum(f: &Spectrum, p: &Params) -> Result<SmallnessReport, SteadyError> {
    let c = smallness_constant(p)?;
    let f_x_norm = x_norm_spectrum(f, p.alpha)?;
    let gate_value = c / p.eps * f_x_norm;
    Ok(SmallnessReport {
        c_alpha_eps: c,
        f_x_norm,
        gate_value,
        passed: gate_value <= GATE_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    fn params(alpha: f64, eps: f64) -> Params {
        Params {
            alpha,
            eps,
            rho: 1.0,
            nu: 0.0,
            dt: 0.01,
            t_end: 1.0,
        }
    }

    #[test]
    fn closed_form_at_reference_point() {
        let c = smallness_constant(&params(1.2, 0.1)).unwrap();
        let want = (0.3f64).max(4.0 * (0.12f64 * 11.76).sqrt() / 0.48);
        assert!((c - want).abs() < 1e-14);
        assert!((c - 9.899494936611665).abs() < 1e-12);
    }

    #[test]
    fn zero_forcing_passes() {
        let g = Grid::two_pi(32).unwrap();
        let r = smallness_gate(&RealField::zeros(&g), &params(1.2, 0.1)).unwrap();
        assert_eq!(r.gate_value, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn constant_blows_up_near_range_edge() {
        let eps = 0.1;
        let edge = 3.0 / (2.0 + eps);
        let near = smallness_constant(&params(edge - 1e-9, eps)).unwrap();
        assert!(near > 1e8);
        let g = Grid::two_pi(32).unwrap();
        let f = RealField::from_fn(&g, |x| 1e-6 * (2.0 * x).sin()).unwrap();
        assert!(!smallness_gate(&f, &params(edge - 1e-9, eps)).unwrap().passed);
        assert!(matches!(
            smallness_gate(&f, &params(edge, eps)),
            Err(SteadyError::Params(ParamsError::SchemeRange { .. }))
        ));
    }
}
