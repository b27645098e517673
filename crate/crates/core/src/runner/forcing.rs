use num_complex::Complex64;

use super::config::{ForcingSpec, Profile, Target};
use crate::params::Params;
use crate::spectral::{random_band_spectrum, x_norm_spectrum, Grid, SpectralError, Spectrum};
use crate::steady::{smallness_constant, GATE_THRESHOLD};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ForcingError {
    #[error("rho = {rho} is below the smallest grid wavenumber {k_min}")]
    GapBelowResolution { rho: f64, k_min: f64 },
    #[error("k_max_frac = {0} must lie in (0, 2/3]")]
    BandFraction(f64),
    #[error("forcing band [{lo}, {hi}] holds no grid mode")]
    EmptyBand { lo: f64, hi: f64 },
    #[error("invalid forcing target: {0}")]
    Target(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Params(#[from] crate::params::ParamsError),
}

/// The band `[ρ, k_max_frac · k_max]` requested by the forcing config, validated against the grid.
pub fn forcing_band(
    spec: &ForcingSpec,
    grid: &Grid,
    p: &Params,
) -> Result<(f64, f64), ForcingError> {
    let k_min = grid.k_min();
    let rho = spec.rho.unwrap_or(p.rho);
    if !(rho.is_finite() && rho >= k_min * (1.0 - 1e-12)) {
        return Err(ForcingError::GapBelowResolution { rho, k_min });
    }
    if !(spec.k_max_frac > 0.0 && spec.k_max_frac <= 2.0 / 3.0 + 1e-15) {
        return Err(ForcingError::BandFraction(spec.k_max_frac));
    }
    let hi = spec.k_max_frac * grid.k_max();
    let lo = rho;
    let has_mode = grid.wavenumbers().iter().any(|&k| k >= lo && k <= hi);
    if !has_mode {
        return Err(ForcingError::EmptyBand { lo, hi });
    }
    Ok((lo, hi))
}

/// Band-limited, Hermitian, mean-zero forcing scaled to its target `‖f‖_X`.
pub fn generate_forcing(
    spec: &ForcingSpec,
    grid: &Grid,
    p: &Params,
) -> Result<Spectrum, ForcingError> {
    let (lo, hi) = forcing_band(spec, grid, p)?;
    let raw = match spec.profile {
        Profile::RandomPhase => random_band_spectrum(grid, spec.seed, lo, hi)?,
        Profile::Sine => {
            let j = grid
                .wavenumbers()
                .iter()
                .position(|&k| k >= lo && k <= hi)
                .expect("band checked above") as i64;
            // sin(kx) = (e^{ikx} − e^{-ikx}) / 2i
            Spectrum::single_mode(grid, j, Complex64::new(0.0, -0.5))?
        }
    };
    let target = target_x_norm(spec, p)?;
    let norm = x_norm_spectrum(&raw, p.alpha)?;
    Ok(raw.scaled(target / norm))
}

/// The `‖f‖_X` value a spec asks for.
pub fn target_x_norm(spec: &ForcingSpec, p: &Params) -> Result<f64, ForcingError> {
    match spec.target {
        Target::XNorm(v) if v >= 0.0 && v.is_finite() => Ok(v),
        Target::XNorm(v) => Err(ForcingError::Target(format!("x-norm {v} must be nonnegative"))),
        Target::Named(_) => {
            if !(spec.margin > 0.0 && spec.margin.is_finite()) {
                return Err(ForcingError::Target(format!(
                    "margin {} must be positive",
                    spec.margin
                )));
            }
            let c = smallness_constant(p)?;
            Ok(spec.margin * GATE_THRESHOLD * p.eps / c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::AutoGate;
    use crate::steady::smallness_gate_spectrum;

    fn params() -> Params {
        Params {
            alpha: 1.2,
            eps: 0.1,
            rho: 3.0,
            nu: 0.0,
            dt: 0.01,
            t_end: 1.0,
        }
    }

    fn spec(target: Target) -> ForcingSpec {
        ForcingSpec {
            seed: 17,
            rho: None,
            k_max_frac: 0.5,
            target,
            margin: 0.5,
            profile: Profile::RandomPhase,
        }
    }

    #[test]
    fn band_gap_and_symmetry() {
        let g = Grid::two_pi(64).unwrap();
        let f = generate_forcing(&spec(Target::XNorm(1e-3)), &g, &params()).unwrap();
        for j in [-2i64, -1, 0, 1, 2] {
            assert_eq!(f.coeff(j).norm(), 0.0);
        }
        assert!(f.coeff(3).norm() > 0.0);
        assert_eq!(f.coeff(17).norm(), 0.0);
        assert_eq!(f.hermitian_defect(), 0.0);
        let again = generate_forcing(&spec(Target::XNorm(1e-3)), &g, &params()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn auto_gate_hits_margin() {
        let g = Grid::two_pi(64).unwrap();
        let f = generate_forcing(&spec(Target::Named(AutoGate::AutoGate)), &g, &params()).unwrap();
        let r = smallness_gate_spectrum(&f, &params()).unwrap();
        assert!((r.gate_value - 0.5 / 3.0).abs() <= 1e-10);
        assert!(r.passed);
    }

    #[test]
    fn gap_below_resolution_is_rejected() {
        let g = Grid::new(64, 2.0 * std::f64::consts::PI).unwrap();
        let s = ForcingSpec {
            rho: Some(0.1),
            ..spec(Target::XNorm(1.0))
        };
        assert!(matches!(
            generate_forcing(&s, &g, &params()),
            Err(ForcingError::GapBelowResolution { .. })
        ));
    }

    #[test]
    fn sine_profile_is_the_lowest_band_mode() {
        let g = Grid::two_pi(32).unwrap();
        let s = ForcingSpec {
            profile: Profile::Sine,
            ..spec(Target::XNorm(2.0))
        };
        let f = generate_forcing(&s, &g, &params()).unwrap();
        assert!(f.coeff(3).norm() > 0.0);
        assert!((f.coeff(3) + f.coeff(-3)).norm() < 1e-15);
        assert!((x_norm_spectrum(&f, 1.2).unwrap() - 2.0).abs() < 1e-14);
    }
}
