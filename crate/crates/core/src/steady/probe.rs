use rayon::prelude::*;
use serde::Serialize;

use super::gate::smallness_gate_spectrum;
use super::linear::energy_norm;
use super::picard::picard_solve_from;
use super::SteadyError;
use crate::params::Params;
use crate::spectral::{random_band_spectrum, sobolev_norm, Spectrum};

/// Fraction of the iterate bound used for the random seeds.
const SEED_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeOutcome {
    pub restart: usize,
    /// `‖U⁰‖_{H^{α/2}}` of the random seed.
    pub seed_norm: f64,
    pub iterations: Option<usize>,
    /// `‖Λ^{α/2}(U_restart − U)‖` against the reference solution.
    pub distance: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub outcomes: Vec<ProbeOutcome>,
    /// Largest pairwise `‖Λ^{α/2}(U_a − U_b)‖` over the reference and every
    /// converged restart.
    pub spread: f64,
}

impl UniquenessReport {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| o.failure.is_some()).count()
    }
}

/// Restart the Picard iteration from `n_perturb` random seeds inside the
/// iterate bound and compare the endpoints. Restarts run in parallel.
#[allow(clippy::too_many_arguments)]
pub fn uniqueness_probe(
    u: &Spectrum,
    f: &Spectrum,
    p: &Params,
    n_perturb: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<UniquenessReport, SteadyError> {
    u.grid().ensure_same(f.grid())?;
    let bound = smallness_gate_spectrum(f, p)?.iterate_bound(p.eps);
    let grid = u.grid();
    let alpha = p.alpha;

    let runs: Vec<(ProbeOutcome, Option<Spectrum>)> = (0..n_perturb)
        .into_par_iter()
        .map(|restart| {
            let key = seed ^ (restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let seed_field = random_band_spectrum(grid, key, grid.k_min(), grid.dealias_cutoff())
                .and_then(|raw| {
                    let n = sobolev_norm(&raw, alpha / 2.0, false)?;
                    Ok(raw.scaled(SEED_FRACTION * bound / n))
                });
            let seed_field = match seed_field {
                Ok(s) => s,
                Err(e) => return failed(restart, 0.0, e.into()),
            };
            let seed_norm = sobolev_norm(&seed_field, alpha / 2.0, false).unwrap_or(f64::NAN);
            match picard_solve_from(f, &seed_field, p, tol, max_iter) {
                Ok((end, trace)) => {
                    let distance = energy_norm(&end.sub(u).expect("same grid"), alpha);
                    (
                        ProbeOutcome {
                            restart,
                            seed_norm,
                            iterations: Some(trace.iterations()),
                            distance: Some(distance),
                            failure: None,
                        },
                        Some(end),
                    )
                }
                Err(e) => failed(restart, seed_norm, e),
            }
        })
        .collect();

    let mut endpoints = vec![u.clone()];
    let mut outcomes = Vec::with_capacity(runs.len());
    for (o, end) in runs {
        outcomes.push(o);
        endpoints.extend(end);
    }
    let mut spread: f64 = 0.0;
    if n_perturb > 0 {
        for a in 0..endpoints.len() {
            for b in a + 1..endpoints.len() {
                let d = energy_norm(&endpoints[a].sub(&endpoints[b])?, alpha);
                spread = spread.max(d);
            }
        }
    }
    Ok(UniquenessReport { outcomes, spread })
}

fn failed(restart: usize, seed_norm: f64, e: SteadyError) -> (ProbeOutcome, Option<Spectrum>) {
    (
        ProbeOutcome {
            restart,
            seed_norm,
            iterations: None,
            distance: None,
            failure: Some(e.to_string()),
        },
        None,
    )
}
