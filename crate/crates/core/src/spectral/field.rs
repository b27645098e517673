use num_complex::Complex64;

use super::{Grid, SpectralError};

/// Samples of a real function at the grid collocation points.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.n_modes() {
            return Err(SpectralError::LengthMismatch {
                expected: grid.n_modes(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite { index });
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.n_modes()],
        }
    }

    pub(crate) fn from_raw(grid: &Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_modes());
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self, SpectralError> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Pointwise map; the result is validated for finiteness.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, SpectralError> {
        Self::new(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add(&self, other: &RealField) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealField) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &RealField) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a * b)
    }

    fn zip_with(
        &self,
        other: &RealField,
        op: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, SpectralError> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    /// `∫ u dx` by the periodic trapezoid rule.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    /// `⟨u, v⟩_{L²}` by the periodic trapezoid rule.
    pub fn inner(&self, other: &RealField) -> Result<f64, SpectralError> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.dx())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Fourier amplitudes of `e^{ikx}`, stored in FFT order (see [`Grid::wavenumbers`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.n_modes() {
            return Err(SpectralError::LengthMismatch {
                expected: grid.n_modes(),
                found: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SpectralError::NonFinite { index });
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Construction without the finiteness scan; callers check for blow-up themselves.
    pub(crate) fn from_raw(grid: &Grid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.n_modes());
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_raw(grid, vec![Complex64::new(0.0, 0.0); grid.n_modes()])
    }

    /// Real single-mode spectrum: `c` at signed mode `j`, `conj c` at `-j`.
    pub fn single_mode(grid: &Grid, j: i64, c: Complex64) -> Result<Self, SpectralError> {
        let mut s = Self::zeros(grid);
        let idx = grid
            .storage_index(j)
            .ok_or(SpectralError::ModeOffGrid(j))?;
        let mirror = grid.mirror_index(idx);
        if mirror == idx {
            s.coeffs[idx] = Complex64::new(c.re, 0.0);
        } else {
            s.coeffs[idx] = c;
            s.coeffs[mirror] = c.conj();
        }
        Ok(s)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of signed mode `j` (zero when off the grid).
    pub fn coeff(&self, j: i64) -> Complex64 {
        self.grid
            .storage_index(j)
            .map(|idx| self.coeffs[idx])
            .unwrap_or_default()
    }

    /// Zero-mode amplitude, i.e. the mean value of the field.
    pub fn mean_coeff(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Spectral `ℓ²` magnitude `(Σ|c_k|²)^{1/2}`.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Whether the zero mode vanishes relative to the rest of the spectrum.
    pub fn is_mean_zero(&self) -> bool {
        self.coeffs[0].norm() <= MEAN_ZERO_RTOL * self.coeff_norm()
    }

    pub(crate) fn ensure_mean_zero(&self) -> Result<(), SpectralError> {
        if self.is_mean_zero() {
            Ok(())
        } else {
            Err(SpectralError::MeanNotZero {
                mean: self.coeffs[0].re,
            })
        }
    }

    /// `max_k |c(k) - conj c(-k)|`; zero for the spectrum of a real field.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|idx| (self.coeffs[idx] - self.coeffs[self.grid.mirror_index(idx)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Multiply mode `k` by `symbol(k)`.
    pub fn apply_symbol(&self, symbol: impl Fn(f64) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.wavenumbers())
            .map(|(c, &k)| c * symbol(k))
            .collect();
        Self::from_raw(&self.grid, coeffs)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_raw(&self.grid, self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &Spectrum) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Spectrum) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Spectrum,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, SpectralError> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_raw(
            &self.grid,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        ))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Real `L²` inner product `∫ u v dx = 2L Σ Re(û conj v̂)`.
    pub fn inner(&self, other: &Spectrum) -> Result<f64, SpectralError> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum::<f64>()
            * self.grid.length())
    }
}

/// Relative threshold below which the zero mode counts as vanishing.
pub const MEAN_ZERO_RTOL: f64 = 1e-12;
