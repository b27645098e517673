//! Seeded random band-limited spectra.
//!
//! Each mode draws from its own ChaCha stream keyed by `(seed, j)`, so the result
//! does not depend on the order in which modes are generated.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Grid, SpectralError, Spectrum};

/// Amplitude and phase for positive mode `j`.
pub fn mode_draw(seed: u64, j: i64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(j as u64);
    let amp: f64 = rng.gen_range(0.5..1.0);
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (amp, phase)
}

/// Hermitian spectrum with random-phase modes on `k_lo ≤ |k| ≤ k_hi`.
///
/// The zero and Nyquist modes are always left empty. Errors when the band
/// holds no grid mode.
pub fn random_band_spectrum(
    grid: &Grid,
    seed: u64,
    k_lo: f64,
    k_hi: f64,
) -> Result<Spectrum, SpectralError> {
    let n = grid.n_modes();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    let mut filled = 0;
    for j in 1..(n as i64 / 2) {
        let k = grid.wavenumbers()[j as usize];
        if k < k_lo || k > k_hi {
            continue;
        }
        let (amp, phase) = mode_draw(seed, j);
        let c = Complex64::from_polar(amp, phase);
        coeffs[j as usize] = c;
        coeffs[n - j as usize] = c.conj();
        filled += 1;
    }
    if filled == 0 {
        return Err(SpectralError::InvalidParameter(format!(
            "band [{k_lo}, {k_hi}] contains no grid mode"
        )));
    }
    Ok(Spectrum::from_raw(grid, coeffs))
}
