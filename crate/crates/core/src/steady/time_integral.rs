use std::ops::ControlFlow;

use super::linear::pinned_mean_zero;
use super::{check_tol, SteadyError};
use crate::evolution::{drive, FrozenTransport};
use crate::params::Params;
use crate::spectral::{l2_norm, Spectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeIntegralReport {
    /// `∫₀^T u dt`
    pub field: Spectrum,
    /// Time `T` at which the tail criterion was met.
    pub horizon: f64,
    /// `L²` norm of the integral over the last unit interval.
    pub tail: f64,
}

/// Integrate `u_t + ½(V u)_x + Λ^α u = 0`, `u(0) = f`, accumulating `∫ u dt`
/// until the contribution of the last unit time interval is at most `tail_tol`
/// in `L²`. The horizon is capped at `p.t_end`.
pub fn steady_via_time_integral(
    v: &Spectrum,
    f: &Spectrum,
    p: &Params,
    tail_tol: f64,
) -> Result<TimeIntegralReport, SteadyError> {
    check_tol(tail_tol)?;
    p.validate()?;
    v.grid().ensure_same(f.grid())?;
    let f = pinned_mean_zero(f)?;
    let rhs = FrozenTransport::new(v);

    let mut acc = Spectrum::zeros(f.grid());
    let mut snapshot = acc.clone();
    let mut t_check = 0.0;
    let mut tail = f64::INFINITY;
    let mut done = false;
    let end = drive(&f, &rhs, p, p.t_end, |info| {
        for (a, c) in acc.coeffs_mut().iter_mut().zip(info.integral.coeffs()) {
            *a += c;
        }
        if info.t - t_check >= 1.0 - 1e-9 {
            tail = l2_norm(&acc.sub(&snapshot).expect("same grid"));
            snapshot = acc.clone();
            t_check = info.t;
            if tail <= tail_tol {
                done = true;
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    if !done {
        return Err(SteadyError::TailNotConverged {
            t: end.t,
            increment: tail,
        });
    }
    Ok(TimeIntegralReport {
        field: acc,
        horizon: end.t,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{inv_frac_laplacian, random_band_spectrum, Grid};
    use crate::steady::linear_steady_solve;

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

    #[test]
    fn zero_coefficient_integrates_the_semigroup() {
        let g = Grid::two_pi(64).unwrap();
        let f = random_band_spectrum(&g, 4, 1.0, 6.0).unwrap();
        let r = steady_via_time_integral(&Spectrum::zeros(&g), &f, &params(100.0), 1e-12).unwrap();
        let exact = inv_frac_laplacian(&f, 1.2).unwrap();
        let err = l2_norm(&r.field.sub(&exact).unwrap());
        assert!(err < 1e-11, "error {err}");
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let g = Grid::two_pi(32).unwrap();
        let v = random_band_spectrum(&g, 4, 1.0, 6.0).unwrap().scaled(0.01);
        let r = steady_via_time_integral(&v, &Spectrum::zeros(&g), &params(5.0), 1e-12).unwrap();
        assert_eq!(r.field.coeff_norm(), 0.0);
        assert_eq!(r.horizon, 1.0);
    }

    #[test]
    fn agrees_with_direct_solve() {
        let g = Grid::two_pi(64).unwrap();
        let v = random_band_spectrum(&g, 21, 1.0, 8.0).unwrap().scaled(0.01);
        let f = random_band_spectrum(&g, 22, 1.0, 8.0).unwrap().scaled(0.01);
        let direct = linear_steady_solve(&v, &f, 1.2, 1e-14).unwrap();
        let r = steady_via_time_integral(&v, &f, &params(200.0), 1e-14).unwrap();
        let rel = l2_norm(&r.field.sub(&direct).unwrap()) / l2_norm(&direct);
        assert!(rel < 1e-4, "relative gap {rel}");
    }

    #[test]
    fn short_horizon_reports_tail() {
        let g = Grid::two_pi(32).unwrap();
        let f = random_band_spectrum(&g, 4, 1.0, 6.0).unwrap();
        assert!(matches!(
            steady_via_time_integral(&Spectrum::zeros(&g), &f, &params(2.0), 1e-12),
            Err(SteadyError::TailNotConverged { .. })
        ));
    }
}
