//! Sobolev, `X` and Lebesgue norms.
//!
//! Spectral norms carry the `2L` measure factor, so on `[-π, π)` the `L²` norm of
//! `sin(3x)` is `√π` and its `Ḣ^s` norm is `3^s √π`.

use super::ops::forward;
use super::{RealField, SpectralError, Spectrum};

/// `Σ_k w(k) |û(k)|² · 2L` with `w = |k|^{2s}` (homogeneous) or `(1+k²)^s`.
pub fn sobolev_norm_sq(s: &Spectrum, order: f64, homogeneous: bool) -> Result<f64, SpectralError> {
    if !order.is_finite() {
        return Err(SpectralError::InvalidOrder(order));
    }
    if homogeneous && order < 0.0 {
        s.ensure_mean_zero()?;
    }
    let sum: f64 = s
        .coeffs()
        .iter()
        .zip(s.grid().wavenumbers())
        .map(|(c, &k)| {
            let w = if homogeneous {
                if k == 0.0 {
                    if order == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    k.abs().powf(2.0 * order)
                }
            } else {
                (1.0 + k * k).powf(order)
            };
            w * c.norm_sqr()
        })
        .sum();
    Ok(sum * s.grid().length())
}

pub fn sobolev_norm(s: &Spectrum, order: f64, homogeneous: bool) -> Result<f64, SpectralError> {
    sobolev_norm_sq(s, order, homogeneous).map(f64::sqrt)
}

/// `‖·‖_{L²}` computed from the spectrum.
pub fn l2_norm(s: &Spectrum) -> f64 {
    sobolev_norm_sq(s, 0.0, false).map(f64::sqrt).unwrap_or(f64::NAN)
}

/// `‖Λ^{order} u‖_{L²}` for `order ≥ 0`, zero mode excluded.
pub fn dot_norm(s: &Spectrum, order: f64) -> Result<f64, SpectralError> {
    sobolev_norm(s, order, true)
}

/// `‖f‖_X = ‖f‖_{Ḣ^{-α/2}} + ‖f‖_{H^{α/2}}`.
pub fn x_norm(f: &RealField, alpha: f64) -> Result<f64, SpectralError> {
    x_norm_spectrum(&forward(f), alpha)
}

pub fn x_norm_spectrum(s: &Spectrum, alpha: f64) -> Result<f64, SpectralError> {
    s.ensure_mean_zero()?;
    Ok(sobolev_norm(s, -alpha / 2.0, true)? + sobolev_norm(s, alpha / 2.0, false)?)
}

/// Grid `L^p` norm: trapezoid quadrature for finite `p`, sample maximum for `p = ∞`.
pub fn lp_norm(f: &RealField, p: f64) -> Result<f64, SpectralError> {
    if p.is_nan() || p < 1.0 {
        return Err(SpectralError::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let dx = f.grid().dx();
    let scale = f.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    // Normalise by the maximum so large p does not overflow.
    let sum: f64 = f.values().iter().map(|v| (v.abs() / scale).powf(p)).sum();
    Ok(scale * (sum * dx).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_norms_have_closed_forms() {
        let g = Grid::two_pi(64).unwrap();
        let s = forward(&RealField::from_fn(&g, |x| (3.0 * x).sin()).unwrap());
        assert!((sobolev_norm(&s, 0.0, false).unwrap() - PI.sqrt()).abs() < 1e-14);
        let h = sobolev_norm(&s, 0.7, true).unwrap();
        assert!((h - 3f64.powf(0.7) * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let g = Grid::two_pi(16).unwrap();
        let z = Spectrum::zeros(&g);
        for order in [-1.0, -0.3, 0.0, 0.6, 2.0] {
            assert_eq!(sobolev_norm(&z, order, true).unwrap(), 0.0);
            assert_eq!(sobolev_norm(&z, order, false).unwrap(), 0.0);
        }
        assert_eq!(x_norm(&RealField::zeros(&g), 1.2).unwrap(), 0.0);
        assert_eq!(lp_norm(&RealField::zeros(&g), 3.0).unwrap(), 0.0);
    }

    #[test]
    fn x_norm_of_sine() {
        let g = Grid::two_pi(64).unwrap();
        let f = RealField::from_fn(&g, |x| (2.0 * x).sin()).unwrap();
        let expect = PI.sqrt() * (2f64.powf(-0.6) + 5f64.powf(0.3));
        assert!((x_norm(&f, 1.2).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn negative_homogeneous_norm_needs_mean_zero() {
        let g = Grid::two_pi(16).unwrap();
        let f = RealField::from_fn(&g, |x| 0.5 + x.cos()).unwrap();
        let s = forward(&f);
        assert!(matches!(
            sobolev_norm(&s, -0.5, true),
            Err(SpectralError::MeanNotZero { .. })
        ));
        assert!(sobolev_norm(&s, -0.5, false).is_ok());
        assert!(x_norm(&f, 1.2).is_err());
    }

    #[test]
    fn lp_norms_of_simple_fields() {
        let g = Grid::two_pi(4096).unwrap();
        let f = RealField::from_fn(&g, f64::sin).unwrap();
        let dx = g.dx();
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() <= dx * dx);
        let c = RealField::from_fn(&g, |_| -2.5).unwrap();
        for p in [1.0, 2.0, 3.5] {
            let expect = 2.5 * (2.0 * PI).powf(1.0 / p);
            assert!((lp_norm(&c, p).unwrap() - expect).abs() < 1e-12 * expect);
        }
        assert!(lp_norm(&c, 0.5).is_err());
    }
}
