//! The spectral invariant suite run by `fraburgers verify`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::output::InvariantRow;
use crate::analysis::{split_diagnostic, truncate, Side};
use crate::evolution::integrate;
use crate::params::Params;
use crate::spectral::{
    derivative, forward, frac_laplacian, inequality_ratios, inverse, lp_norm, random_band_spectrum,
    semigroup, sobolev_norm, x_norm_spectrum, Grid, RatioMaxima, RatioReport, RatioSettings,
    RealField, SpectralError, Spectrum,
};

pub struct VerifyOutcome {
    pub invariants: Vec<InvariantRow>,
    pub ratios: Vec<RatioReport>,
    pub maxima: RatioMaxima,
}

fn row(name: &str, worst: f64, tolerance: f64) -> InvariantRow {
    InvariantRow {
        name: name.to_string(),
        worst,
        tolerance,
        passed: worst <= tolerance,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Seeded mean-zero field on the dealiased band, unit peak.
fn sample(grid: &Grid, seed: u64) -> Result<RealField, SpectralError> {
    let s = random_band_spectrum(grid, seed, grid.k_min(), grid.dealias_cutoff() / 2.0)?;
    let f = inverse(&s);
    let peak = f.max_abs();
    Ok(f.scaled(1.0 / peak))
}

fn family_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn verify_suite(
    grid: &Grid,
    p: &Params,
    seed: u64,
    family_size: usize,
) -> Result<VerifyOutcome, SpectralError> {
    let alpha = p.alpha;
    let mut inv = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family: Vec<RealField> = (0..family_size.max(2))
        .map(|i| sample(grid, family_seed(seed, i)))
        .collect::<Result<_, _>>()?;

    // Single-mode multipliers against closed forms.
    let mut worst: f64 = 0.0;
    for j in 1..(grid.n_modes() as i64 / 2) {
        let k = grid.wavenumbers()[j as usize];
        let c = Complex64::new(0.3, -0.7);
        let s = Spectrum::single_mode(grid, j, c)?;
        let checks = [
            (frac_laplacian(&s, alpha)?.coeff(j), c * k.powf(alpha)),
            (derivative(&s).coeff(j), c * Complex64::new(0.0, k)),
            (
                semigroup(&s, alpha, 0.37, 0.0)?.coeff(j),
                c * (-k.powf(alpha) * 0.37).exp(),
            ),
        ];
        for (got, want) in checks {
            if want.norm() > 0.0 {
                worst = worst.max((got - want).norm() / want.norm());
            }
        }
    }
    inv.push(row("single_mode_multipliers", worst, 1e-12));

    let mut worst: f64 = 0.0;
    for f in &family {
        let back = inverse(&forward(f));
        let err = back.sub(f)?.max_abs() / f.max_abs();
        worst = worst.max(err);
    }
    inv.push(row("round_trip", worst, 1e-12));

    let mut worst: f64 = 0.0;
    for f in &family {
        let spectral = sobolev_norm(&forward(f), 0.0, false)?;
        let quad = f.inner(f)?.sqrt();
        worst = worst.max((spectral - quad).abs() / quad);
    }
    inv.push(row("parseval", worst, 1e-10));

    let mut worst: f64 = 0.0;
    for pair in family.windows(2) {
        let (u, v) = (forward(&pair[0]), forward(&pair[1]));
        let lhs = frac_laplacian(&u, alpha)?.inner(&v)?;
        let rhs = frac_laplacian(&u, alpha / 2.0)?.inner(&frac_laplacian(&v, alpha / 2.0)?)?;
        let scale = sobolev_norm(&u, alpha / 2.0, true)? * sobolev_norm(&v, alpha / 2.0, true)?;
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    inv.push(row("self_adjointness", worst, 1e-11));

    let mut worst: f64 = 0.0;
    for f in family.iter().take(10) {
        let c: f64 = rng.gen_range(-50.0..50.0);
        let fs = forward(f);
        let cs = forward(&f.scaled(c));
        let pairs = [
            (sobolev_norm(&cs, -alpha / 2.0, true)?, sobolev_norm(&fs, -alpha / 2.0, true)?),
            (sobolev_norm(&cs, 0.0, false)?, sobolev_norm(&fs, 0.0, false)?),
            (sobolev_norm(&cs, alpha / 2.0, false)?, sobolev_norm(&fs, alpha / 2.0, false)?),
            (sobolev_norm(&cs, 1.0, true)?, sobolev_norm(&fs, 1.0, true)?),
            (x_norm_spectrum(&cs, alpha)?, x_norm_spectrum(&fs, alpha)?),
            (lp_norm(&f.scaled(c), 4.0)?, lp_norm(f, 4.0)?),
            (lp_norm(&f.scaled(c), f64::INFINITY)?, lp_norm(f, f64::INFINITY)?),
        ];
        for (scaled, base) in pairs {
            worst = worst.max(rel(scaled, c.abs() * base));
        }
    }
    inv.push(row("homogeneity", worst, 1e-12));

    // A short nonlinear run for the dynamical invariants.
    let u0 = forward(&family[0].scaled(0.5));
    let f = random_band_spectrum(grid, family_seed(seed, 10_000), grid.k_min(), grid.dealias_cutoff() / 2.0)?
        .scaled(1e-3);
    let dt = 0.25 * grid.dx();
    let run = Params {
        dt,
        t_end: 50.0 * dt,
        ..*p
    };
    let (traj, ledger) = integrate(&u0, &f, &run, 1).map_err(|e| SpectralError::InvalidParameter(e.to_string()))?;
    let herm = traj
        .samples()
        .iter()
        .map(|s| s.u.hermitian_defect() / s.u.coeff_norm().max(1.0))
        .fold(0.0, f64::max);
    inv.push(row("hermitian_preservation", herm, 1e-12));
    let mean0 = ledger.rows[0].mean;
    let drift = ledger
        .rows
        .iter()
        .map(|r| (r.mean - mean0).abs() / (1.0 + r.t))
        .fold(0.0, f64::max);
    inv.push(row("mean_conservation", drift, 1e-9));
    inv.push(row("mode_partition", split_diagnostic(&traj, p).partition_defect(), 1e-12));

    let mut lipschitz: f64 = 0.0;
    let mut lp_excess: f64 = 0.0;
    for pair in family.windows(2).take(20) {
        let lambda: f64 = rng.gen_range(0.0..1.0);
        for side in Side::BOTH {
            let (hu, hv) = (truncate(&pair[0], lambda, side), truncate(&pair[1], lambda, side));
            for ((a, b), (x, y)) in hu
                .values()
                .iter()
                .zip(hv.values())
                .zip(pair[0].values().iter().zip(pair[1].values()))
            {
                // Excess measured in units of the operands' magnitude.
                let scale = (x.abs() + y.abs() + lambda).max(f64::MIN_POSITIVE);
                lipschitz = lipschitz.max(((a - b).abs() - (x - y).abs()) / scale);
            }
            for q in [1.0, 2.0, 4.0, f64::INFINITY] {
                let ratio = lp_norm(&hu, q)? / lp_norm(&pair[0], q)?;
                lp_excess = lp_excess.max(ratio - 1.0);
            }
        }
    }
    inv.push(row("truncation_lipschitz", lipschitz.max(0.0), 4.0 * f64::EPSILON));
    inv.push(row("truncation_lp_contraction", lp_excess.max(0.0), 1e-14));

    let settings = RatioSettings::for_alpha(alpha);
    let mut ratios = Vec::with_capacity(family.len());
    let mut maxima = RatioMaxima::default();
    let mut scale_worst: f64 = 0.0;
    for (i, f) in family.iter().enumerate() {
        let g = &family[(i + 1) % family.len()];
        let r = inequality_ratios(f, g, &settings)?;
        let c: f64 = rng.gen_range(0.1..10.0);
        let rc = inequality_ratios(&f.scaled(c), g, &settings)?;
        if let (Some(a), Some(b)) = (r.embedding, rc.embedding) {
            scale_worst = scale_worst.max(rel(a, b));
        }
        maxima.absorb(&r);
        ratios.push(r);
    }
    inv.push(row("ratio_family_finite", if maxima.all_finite() { 0.0 } else { 1.0 }, 0.0));
    inv.push(row("embedding_scale_invariance", scale_worst, 1e-12));

    Ok(VerifyOutcome {
        invariants: inv,
        ratios,
        maxima,
    })
}
