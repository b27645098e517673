use num_complex::Complex64;

use super::{check_tol, SteadyError};
use crate::evolution::transport_flux;
use crate::spectral::ops::inverse_values;
use crate::spectral::Spectrum;

/// Inner iterations allowed before giving up.
const INNER_MAX: usize = 2000;

/// Copy of `f` with its (validated) zero mode set to exactly 0.
pub(crate) fn pinned_mean_zero(f: &Spectrum) -> Result<Spectrum, SteadyError> {
    f.ensure_mean_zero()?;
    let mut out = f.clone();
    out.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    Ok(out)
}

/// `‖r‖_{Ḣ^{-α/2}}` ignoring the zero mode.
pub(crate) fn dual_norm(r: &Spectrum, alpha: f64) -> f64 {
    weighted(r, |k| k.abs().powf(-alpha))
}

/// `‖u‖_{Ḣ^{α/2}}` ignoring the zero mode.
pub(crate) fn energy_norm(u: &Spectrum, alpha: f64) -> f64 {
    weighted(u, |k| k.abs().powf(alpha))
}

fn weighted(s: &Spectrum, w: impl Fn(f64) -> f64) -> f64 {
    let sum: f64 = s
        .coeffs()
        .iter()
        .zip(s.grid().wavenumbers())
        .filter(|(_, &k)| k != 0.0)
        .map(|(c, &k)| w(k) * c.norm_sqr())
        .sum();
    (sum * s.grid().length()).sqrt()
}

/// `Λ^{-α}` with the zero mode sent to 0.
pub(crate) fn inv_lambda(s: &Spectrum, alpha: f64) -> Spectrum {
    s.apply_symbol(|k| if k == 0.0 { 0.0 } else { k.abs().powf(-alpha) })
}

pub(crate) fn lambda(s: &Spectrum, alpha: f64) -> Spectrum {
    s.apply_symbol(|k| k.abs().powf(alpha))
}

/// `‖½(V U)_x + Λ^α U − f‖_{Ḣ^{-α/2}}` with the dealiased product.
pub fn linear_residual(
    v: &Spectrum,
    u: &Spectrum,
    f: &Spectrum,
    alpha: f64,
) -> Result<f64, SteadyError> {
    let f = pinned_mean_zero(f)?;
    let v_phys = inverse_values(v);
    let (_, res) = richardson_update(&v_phys, u, &f, alpha);
    Ok(res)
}

// Returns `Λ^{-α}(f - ½(VU)_x)` and the residual of `u`; the Ḣ^{α/2} size of
// the update equals that residual.
fn richardson_update(v_phys: &[f64], u: &Spectrum, f: &Spectrum, alpha: f64) -> (Spectrum, f64) {
    let mut g = transport_flux(v_phys, u);
    for (c, fc) in g.coeffs_mut().iter_mut().zip(f.coeffs()) {
        *c += fc;
    }
    let next = inv_lambda(&g, alpha);
    let res = dual_norm(&g.sub(&lambda(u, alpha)).expect("same grid"), alpha);
    (next, res)
}

/// Solve `½(V U)_x + Λ^α U = f` by preconditioned Richardson iteration from 0.
pub fn linear_steady_solve(
    v: &Spectrum,
    f: &Spectrum,
    alpha: f64,
    tol: f64,
) -> Result<Spectrum, SteadyError> {
    linear_steady_solve_from(v, f, &Spectrum::zeros(f.grid()), alpha, tol).map(|(u, _)| u)
}

/// As [`linear_steady_solve`] with a warm start; also returns the iteration count.
pub fn linear_steady_solve_from(
    v: &Spectrum,
    f: &Spectrum,
    start: &Spectrum,
    alpha: f64,
    tol: f64,
) -> Result<(Spectrum, usize), SteadyError> {
    check_tol(tol)?;
    v.grid().ensure_same(f.grid())?;
    f.grid().ensure_same(start.grid())?;
    let f = pinned_mean_zero(f)?;
    let v_phys = inverse_values(v);
    // Growth below this level is round-off, not divergence.
    let floor = 1e3 * f64::EPSILON * dual_norm(&f, alpha);

    let mut u = start.clone();
    u.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut growth = 0;
    for iterations in 0..INNER_MAX {
        let (next, res) = richardson_update(&v_phys, &u, &f, alpha);
        if !res.is_finite() {
            return Err(SteadyError::Divergence {
                iterations,
                increment: res,
            });
        }
        if res <= tol {
            return Ok((u, iterations));
        }
        if res > last && res > floor {
            growth += 1;
            if growth >= 3 {
                return Err(SteadyError::Divergence {
                    iterations,
                    increment: res,
                });
            }
        } else {
            growth = 0;
        }
        last = res;
        u = next;
    }
    let (_, residual) = richardson_update(&v_phys, &u, &f, alpha);
    Err(SteadyError::InnerNotConverged {
        iterations: INNER_MAX,
        residual,
    })
}
