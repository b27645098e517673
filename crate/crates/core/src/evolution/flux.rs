use crate::spectral::ops::{dealiased_product, inverse_values};
use crate::spectral::{derivative, Grid, Spectrum};

/// Dealiased spectral image of `-½ (u²)_x`.
pub fn nonlinear_flux(u: &Spectrum) -> Spectrum {
    let phys = inverse_values(u);
    derivative(&dealiased_product(u.grid(), &phys, &phys)).scaled(-0.5)
}

/// Dealiased spectral image of `-½ (V u)_x` with `V` given in physical space.
pub fn transport_flux(v_phys: &[f64], u: &Spectrum) -> Spectrum {
    let phys = inverse_values(u);
    derivative(&dealiased_product(u.grid(), v_phys, &phys)).scaled(-0.5)
}

/// The non-stiff part `F(t, u)` of an evolution equation `u_t + (Λ^α - ν∂_xx) u = F`.
pub trait Rhs {
    fn eval(&self, t: f64, u: &Spectrum) -> Spectrum;

    /// Characteristic advection speed used for the step-size restriction.
    fn advection_speed(&self, u: &Spectrum) -> f64;
}

/// `F = -½(u²)_x + f` for the forced fractal Burgers equation.
pub struct ForcedBurgers {
    forcing: Spectrum,
}

impl ForcedBurgers {
    pub fn new(forcing: Spectrum) -> Self {
        Self { forcing }
    }
}

impl Rhs for ForcedBurgers {
    fn eval(&self, _t: f64, u: &Spectrum) -> Spectrum {
        let mut flux = nonlinear_flux(u);
        for (c, f) in flux.coeffs_mut().iter_mut().zip(self.forcing.coeffs()) {
            *c += f;
        }
        flux
    }

    fn advection_speed(&self, u: &Spectrum) -> f64 {
        max_abs(&inverse_values(u))
    }
}

/// `F = -½(V u)_x` with a frozen coefficient `V`.
pub struct FrozenTransport {
    v_phys: Vec<f64>,
    v_max: f64,
}

impl FrozenTransport {
    pub fn new(v: &Spectrum) -> Self {
        let v_phys = inverse_values(v);
        let v_max = max_abs(&v_phys);
        Self { v_phys, v_max }
    }
}

impl Rhs for FrozenTransport {
    fn eval(&self, _t: f64, u: &Spectrum) -> Spectrum {
        transport_flux(&self.v_phys, u)
    }

    fn advection_speed(&self, _u: &Spectrum) -> f64 {
        self.v_max
    }
}

/// Any closure `(t, u) -> F` together with a fixed speed bound.
pub struct FnRhs<F> {
    f: F,
    speed: f64,
}

impl<F: Fn(f64, &Spectrum) -> Spectrum> FnRhs<F> {
    pub fn new(f: F, speed: f64) -> Self {
        Self { f, speed }
    }
}

impl<F: Fn(f64, &Spectrum) -> Spectrum> Rhs for FnRhs<F> {
    fn eval(&self, t: f64, u: &Spectrum) -> Spectrum {
        (self.f)(t, u)
    }

    fn advection_speed(&self, u: &Spectrum) -> f64 {
        self.speed.max(max_abs(&inverse_values(u)))
    }
}

pub(crate) fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest admissible step: `0.5 dx / max(1, speed)`.
pub fn admissible_dt(grid: &Grid, speed: f64) -> f64 {
    0.5 * grid.dx() / speed.max(1.0)
}
