//! Manufactured solution `u*(x, t) = e^{-t} sin(2x)` on `[-π, π)` for
//! measuring the temporal order of the integrator.

use std::ops::ControlFlow;

use num_complex::Complex64;

use super::{drive, nonlinear_flux, EvolutionError, FnRhs};
use crate::params::Params;
use crate::spectral::{l2_norm, Grid, Spectrum};

/// The exact field `e^{-t} sin(2x)` as a spectrum.
pub fn manufactured_exact(grid: &Grid, t: f64) -> Spectrum {
    sine_mode(grid, 2, (-t).exp())
}

/// `f = u*_t + u* u*_x + Λ^α u* - ν u*_xx`
/// `  = (2^α + 4ν - 1) e^{-t} sin 2x + e^{-2t} sin 4x`.
pub fn manufactured_forcing(grid: &Grid, alpha: f64, nu: f64, t: f64) -> Spectrum {
    let a = (2f64.powf(alpha) + 4.0 * nu - 1.0) * (-t).exp();
    let mut f = sine_mode(grid, 2, a);
    let b = sine_mode(grid, 4, (-2.0 * t).exp());
    for (c, d) in f.coeffs_mut().iter_mut().zip(b.coeffs()) {
        *c += d;
    }
    f
}

fn sine_mode(grid: &Grid, j: i64, amp: f64) -> Spectrum {
    // sin(jx) = (e^{ijx} - e^{-ijx}) / 2i; index j has wavenumber j when L = π.
    let mut s = Spectrum::zeros(grid);
    let c = Complex64::new(0.0, -0.5 * amp);
    let (p, m) = (grid.storage_index(j), grid.storage_index(-j));
    if let (Some(p), Some(m)) = (p, m) {
        s.coeffs_mut()[p] = c;
        s.coeffs_mut()[m] = c.conj();
    }
    s
}

/// `L²` error at `t_end` for each step size.
pub fn manufactured_errors(
    grid: &Grid,
    p: &Params,
    dts: &[f64],
) -> Result<Vec<f64>, EvolutionError> {
    let (alpha, nu) = (p.alpha, p.nu);
    let rhs = FnRhs::new(
        |t: f64, u: &Spectrum| {
            let mut flux = nonlinear_flux(u);
            let f = manufactured_forcing(grid, alpha, nu, t);
            for (c, d) in flux.coeffs_mut().iter_mut().zip(f.coeffs()) {
                *c += d;
            }
            flux
        },
        1.0,
    );
    let u0 = manufactured_exact(grid, 0.0);
    let exact = manufactured_exact(grid, p.t_end);
    dts.iter()
        .map(|&dt| {
            let q = p.with_dt(dt);
            let end = drive(&u0, &rhs, &q, q.t_end, |_| ControlFlow::Continue(()))?;
            Ok(l2_norm(&end.u.sub(&exact)?))
        })
        .collect()
}

/// Observed orders `log2(e_i / e_{i+1})` for a halving sequence.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::ForcedBurgers;
    use crate::evolution::Rhs;

    #[test]
    fn forcing_is_the_residual_of_the_exact_field() {
        // u*_t = -u*, so f - (-½(u*²)_x) - Λ^α u* must equal -u*.
        let g = Grid::two_pi(32).unwrap();
        let (alpha, t) = (1.3, 0.7);
        let u = manufactured_exact(&g, t);
        let f = manufactured_forcing(&g, alpha, 0.0, t);
        let rhs = ForcedBurgers::new(f).eval(t, &u);
        let lin = crate::spectral::frac_laplacian(&u, alpha).unwrap();
        let ut = rhs.sub(&lin).unwrap();
        assert!(l2_norm(&ut.add(&u).unwrap()) < 1e-14);
    }

    #[test]
    fn second_order_in_time() {
        let g = Grid::two_pi(64).unwrap();
        let p = Params {
            alpha: 1.2,
            eps: 0.1,
            rho: 1.0,
            nu: 0.0,
            dt: 0.04,
            t_end: 1.0,
        };
        let e = manufactured_errors(&g, &p, &[0.04, 0.02, 0.01]).unwrap();
        for q in observed_orders(&e) {
            assert!(q >= 1.9, "order {q}, errors {e:?}");
        }
    }
}
