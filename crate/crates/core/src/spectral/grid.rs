use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::SpectralError;

/// Periodic collocation grid on `[-L, L)` together with its FFT plans.
///
/// Cloning is cheap: the wavenumber table and plans are shared.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n_modes: usize,
    half_period: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub const MIN_MODES: usize = 8;

    pub fn new(n_modes: usize, half_period: f64) -> Result<Self, SpectralError> {
        if n_modes < Self::MIN_MODES || n_modes % 2 != 0 {
            return Err(SpectralError::InvalidGrid(format!(
                "n_modes must be even and >= {}, got {n_modes}",
                Self::MIN_MODES
            )));
        }
        if !(half_period.is_finite() && half_period > 0.0) {
            return Err(SpectralError::InvalidGrid(format!(
                "half_period must be positive and finite, got {half_period}"
            )));
        }
        let wavenumbers = (0..n_modes)
            .map(|idx| PI * signed_index(idx, n_modes) as f64 / half_period)
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n_modes);
        let inverse = planner.plan_fft_inverse(n_modes);
        Ok(Self {
            inner: Arc::new(GridInner {
                n_modes,
                half_period,
                wavenumbers,
                forward,
                inverse,
            }),
        })
    }

    /// The `[-π, π)` grid used by most closed-form checks.
    pub fn two_pi(n_modes: usize) -> Result<Self, SpectralError> {
        Self::new(n_modes, PI)
    }

    pub fn n_modes(&self) -> usize {
        self.inner.n_modes
    }

    pub fn half_period(&self) -> f64 {
        self.inner.half_period
    }

    /// Domain length `2L`.
    pub fn length(&self) -> f64 {
        2.0 * self.inner.half_period
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.inner.n_modes as f64
    }

    /// Collocation point `x_j = -L + j dx`.
    pub fn x(&self, j: usize) -> f64 {
        -self.inner.half_period + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_modes()).map(move |j| self.x(j))
    }

    /// Wavenumbers in FFT storage order: `0, 1, .., n/2-1, -n/2, .., -1` times `π/L`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    /// Signed mode index `j` stored at position `idx`.
    pub fn signed_index(&self, idx: usize) -> i64 {
        signed_index(idx, self.inner.n_modes)
    }

    /// Storage position of signed mode `j`, if it is on the grid.
    pub fn storage_index(&self, j: i64) -> Option<usize> {
        let half = (self.inner.n_modes / 2) as i64;
        if j < -half || j >= half {
            return None;
        }
        Some(if j >= 0 {
            j as usize
        } else {
            (j + self.inner.n_modes as i64) as usize
        })
    }

    /// Storage position of the mode paired with `idx` under `k -> -k`.
    pub fn mirror_index(&self, idx: usize) -> usize {
        (self.inner.n_modes - idx) % self.inner.n_modes
    }

    pub fn nyquist_index(&self) -> usize {
        self.inner.n_modes / 2
    }

    /// Smallest nonzero wavenumber `π/L`.
    pub fn k_min(&self) -> f64 {
        PI / self.inner.half_period
    }

    /// Nyquist wavenumber magnitude `π n / (2L)`.
    pub fn k_max(&self) -> f64 {
        PI * (self.inner.n_modes / 2) as f64 / self.inner.half_period
    }

    /// Two-thirds rule cutoff.
    pub fn dealias_cutoff(&self) -> f64 {
        2.0 / 3.0 * self.k_max()
    }

    pub(crate) fn fft_forward(&self) -> &dyn Fft<f64> {
        self.inner.forward.as_ref()
    }

    pub(crate) fn fft_inverse(&self) -> &dyn Fft<f64> {
        self.inner.inverse.as_ref()
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n_modes == other.inner.n_modes
                && self.inner.half_period == other.inner.half_period)
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<(), SpectralError> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(SpectralError::GridMismatch {
                left: (self.n_modes(), self.half_period()),
                right: (other.n_modes(), other.half_period()),
            })
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n_modes", &self.inner.n_modes)
            .field("half_period", &self.inner.half_period)
            .finish()
    }
}

fn signed_index(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_grids() {
        assert!(Grid::new(7, 1.0).is_err());
        assert!(Grid::new(6, 1.0).is_err());
        assert!(Grid::new(10, 1.0).is_ok());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::new(16, f64::NAN).is_err());
    }

    #[test]
    fn spacing_covers_period_exactly() {
        let g = Grid::new(1024, 16.0 * PI).unwrap();
        assert_eq!(g.dx() * g.n_modes() as f64, g.length());
        assert_eq!(g.x(0), -16.0 * PI);
    }

    #[test]
    fn wavenumbers_symmetric_except_nyquist() {
        let g = Grid::new(16, 2.0).unwrap();
        let k = g.wavenumbers();
        for idx in 1..16 {
            let m = g.mirror_index(idx);
            if idx == g.nyquist_index() {
                assert_eq!(m, idx);
                assert!(k[idx] < 0.0);
            } else {
                assert_eq!(k[idx], -k[m]);
            }
        }
        assert_eq!(k[0], 0.0);
        assert_eq!(g.storage_index(-8), Some(8));
        assert_eq!(g.storage_index(8), None);
        assert_eq!(g.storage_index(-1), Some(15));
    }
}
