//! Transforms and Fourier-multiplier operators.
//!
//! `forward` returns the amplitudes of `e^{ikx}` (the DFT divided by `n`), so a
//! single cosine of amplitude one has coefficients `1/2` at `±k`.

use num_complex::Complex64;

use super::{Grid, RealField, SpectralError, Spectrum};

pub fn forward(f: &RealField) -> Spectrum {
    forward_values(f.grid(), f.values())
}

pub(crate) fn forward_values(grid: &Grid, values: &[f64]) -> Spectrum {
    let n = grid.n_modes();
    debug_assert_eq!(values.len(), n);
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.fft_forward().process(&mut buf);
    // Samples start at x = -L, so mode j picks up the phase e^{ik_j L} = (-1)^j.
    let scale = 1.0 / n as f64;
    for (idx, c) in buf.iter_mut().enumerate() {
        let sign = if grid.signed_index(idx) % 2 == 0 { 1.0 } else { -1.0 };
        *c *= scale * sign;
    }
    Spectrum::from_raw(grid, buf)
}

/// Real part of the synthesis `Σ_k c_k e^{ikx_j}`.
pub fn inverse(s: &Spectrum) -> RealField {
    RealField::from_raw(s.grid(), inverse_values(s))
}

pub(crate) fn inverse_values(s: &Spectrum) -> Vec<f64> {
    let grid = s.grid();
    let mut buf: Vec<Complex64> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            if grid.signed_index(idx) % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    grid.fft_inverse().process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// `Λ^order`: multiply mode `k` by `|k|^order`.
pub fn frac_laplacian(s: &Spectrum, order: f64) -> Result<Spectrum, SpectralError> {
    if !order.is_finite() {
        return Err(SpectralError::InvalidOrder(order));
    }
    if order < 0.0 {
        return Err(SpectralError::NegativeOrder(order));
    }
    Ok(s.apply_symbol(|k| k.abs().powf(order)))
}

/// `Λ^{-order}` on mean-zero spectra; the zero mode stays 0.
pub fn inv_frac_laplacian(s: &Spectrum, order: f64) -> Result<Spectrum, SpectralError> {
    if !(order.is_finite() && order > 0.0) {
        return Err(SpectralError::InvalidOrder(order));
    }
    s.ensure_mean_zero()?;
    Ok(s.apply_symbol(|k| if k == 0.0 { 0.0 } else { k.abs().powf(-order) }))
}

/// `∂_x`. The Nyquist mode has no real-valued derivative and is dropped.
pub fn derivative(s: &Spectrum) -> Spectrum {
    let grid = s.grid();
    let nyq = grid.nyquist_index();
    let coeffs = s
        .coeffs()
        .iter()
        .zip(grid.wavenumbers())
        .enumerate()
        .map(|(idx, (c, &k))| {
            if idx == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                c * Complex64::new(0.0, k)
            }
        })
        .collect();
    Spectrum::from_raw(grid, coeffs)
}

/// Linear decay factor `exp(-(|k|^α + ν k²) t)` per mode.
pub fn semigroup_symbol(k: f64, alpha: f64, nu: f64, t: f64) -> f64 {
    (-(k.abs().powf(alpha) + nu * k * k) * t).exp()
}

/// `e^{-t(Λ^α - ν∂_xx)}`.
pub fn semigroup(s: &Spectrum, alpha: f64, t: f64, nu: f64) -> Result<Spectrum, SpectralError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SpectralError::NegativeTime(t));
    }
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(SpectralError::InvalidParameter(format!(
            "viscosity must be nonnegative, got {nu}"
        )));
    }
    Ok(s.apply_symbol(|k| semigroup_symbol(k, alpha, nu, t)))
}

/// Zero every mode above the two-thirds cutoff (Nyquist included).
pub fn dealias(s: &Spectrum) -> Spectrum {
    let cutoff = s.grid().dealias_cutoff();
    let nyq = s.grid().nyquist_index();
    let coeffs = s
        .coeffs()
        .iter()
        .zip(s.grid().wavenumbers())
        .enumerate()
        .map(|(idx, (&c, &k))| {
            if idx == nyq || k.abs() > cutoff {
                Complex64::new(0.0, 0.0)
            } else {
                c
            }
        })
        .collect();
    Spectrum::from_raw(s.grid(), coeffs)
}

/// Dealiased spectrum of the pointwise product of two sampled fields.
pub(crate) fn dealiased_product(grid: &Grid, a: &[f64], b: &[f64]) -> Spectrum {
    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    dealias(&forward_values(grid, &prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn cosine_has_half_amplitudes() {
        let g = Grid::two_pi(64).unwrap();
        let f = RealField::from_fn(&g, |x| (2.0 * x).cos()).unwrap();
        let s = forward(&f);
        for idx in 0..64 {
            let j = g.signed_index(idx);
            let expect = if j.abs() == 2 { 0.5 } else { 0.0 };
            assert!((s.coeffs()[idx] - Complex64::new(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_field_has_zero_spectrum() {
        let g = Grid::two_pi(32).unwrap();
        let s = forward(&RealField::zeros(&g));
        assert!(s.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn single_mode_multipliers_are_exact() {
        let g = Grid::two_pi(32).unwrap();
        let e2 = Spectrum::single_mode(&g, 2, Complex64::new(1.0, 0.0)).unwrap();
        let l = frac_laplacian(&e2, 1.3).unwrap();
        assert!(rel(l.coeff(2), Complex64::new(2f64.powf(1.3), 0.0)) < 1e-13);
        let il = inv_frac_laplacian(&e2, 1.2).unwrap();
        assert!(rel(il.coeff(-2), Complex64::new(2f64.powf(-1.2), 0.0)) < 1e-13);
        let sg = semigroup(
            &Spectrum::single_mode(&g, 3, Complex64::new(1.0, 0.0)).unwrap(),
            1.25,
            0.7,
            0.0,
        )
        .unwrap();
        let expect = (-(3f64.powf(1.25)) * 0.7).exp();
        assert!(rel(sg.coeff(3), Complex64::new(expect, 0.0)) < 1e-13);
    }

    #[test]
    fn constant_maps_to_zero() {
        let g = Grid::two_pi(16).unwrap();
        let c = forward(&RealField::from_fn(&g, |_| 3.0).unwrap());
        let l = frac_laplacian(&c, 0.8).unwrap();
        assert!(l.coeff_norm() == 0.0);
        assert!(derivative(&c).coeff_norm() == 0.0);
    }

    #[test]
    fn sum_of_sines_scales_modes_independently() {
        let g = Grid::two_pi(64).unwrap();
        let f = RealField::from_fn(&g, |x| x.sin() + (3.0 * x).sin()).unwrap();
        let got = inverse(&frac_laplacian(&forward(&f), 1.2).unwrap());
        let c = 3f64.powf(1.2);
        for (x, v) in g.points().zip(got.values()) {
            assert!((v - (x.sin() + c * (3.0 * x).sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_orders_and_times_are_errors() {
        let g = Grid::two_pi(16).unwrap();
        let z = Spectrum::zeros(&g);
        assert!(matches!(
            frac_laplacian(&z, -0.5),
            Err(SpectralError::NegativeOrder(_))
        ));
        assert!(inv_frac_laplacian(&z, 0.0).is_err());
        assert!(matches!(
            semigroup(&z, 1.2, -1.0, 0.0),
            Err(SpectralError::NegativeTime(_))
        ));
    }

    #[test]
    fn inverse_laplacian_needs_mean_zero() {
        let g = Grid::two_pi(16).unwrap();
        let f = RealField::from_fn(&g, |x| 1.0 + x.sin()).unwrap();
        assert!(matches!(
            inv_frac_laplacian(&forward(&f), 1.2),
            Err(SpectralError::MeanNotZero { .. })
        ));
    }

    #[test]
    fn derivative_of_sine() {
        let g = Grid::two_pi(32).unwrap();
        let f = RealField::from_fn(&g, |x| (2.0 * x).sin()).unwrap();
        let d = inverse(&derivative(&forward(&f)));
        for (x, v) in g.points().zip(d.values()) {
            assert!((v - 2.0 * (2.0 * x).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn semigroup_at_zero_is_identity() {
        let g = Grid::new(32, 3.0).unwrap();
        let f = RealField::from_fn(&g, |x| (PI * x / 3.0).sin() + 0.2).unwrap();
        let s = forward(&f);
        assert_eq!(semigroup(&s, 1.3, 0.0, 0.1).unwrap(), s);
    }

    #[test]
    fn dealias_removes_nyquist_and_is_idempotent() {
        let g = Grid::two_pi(32).unwrap();
        let nyq = Spectrum::single_mode(&g, -16, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(dealias(&nyq).coeff_norm(), 0.0);
        let low = Spectrum::single_mode(&g, 5, Complex64::new(0.3, 0.1)).unwrap();
        assert_eq!(dealias(&low), low);
        let f = RealField::from_fn(&g, |x| (x * 7.0).sin() + (x * 12.0).cos()).unwrap();
        let once = dealias(&forward(&f));
        assert_eq!(dealias(&once), once);
        assert_eq!(once.coeff(12), Complex64::new(0.0, 0.0));
    }
}
