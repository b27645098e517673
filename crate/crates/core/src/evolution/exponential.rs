//! Second-order exponential Runge–Kutta (Cox–Matthews ETD2RK) for
//! `û_t = -λ(k) û + F(t, u)` with `λ(k) = |k|^α + ν k²`.
//!
//! The linear part is propagated exactly. Steady states of the full equation are
//! fixed points of the discrete map, which the stability experiment relies on.

use num_complex::Complex64;

use crate::spectral::{Grid, Spectrum};

/// `φ_k(z) = Σ_{j≥0} z^j / (j+k)!`, the exponential-integrator weights.
pub fn phi(k: u32, z: f64) -> f64 {
    if z.abs() < 0.5 {
        // Power series; 20 terms reach machine precision for |z| < 0.5.
        let mut term = 1.0 / factorial(k);
        let mut sum = term;
        for j in 1..20 {
            term *= z / (j + k) as f64;
            sum += term;
        }
        return sum;
    }
    // φ_0 = e^z, φ_{k+1} = (φ_k - 1/k!) / z.
    let mut value = z.exp();
    for j in 0..k {
        value = (value - 1.0 / factorial(j)) / z;
    }
    value
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Per-mode weights for one step of length `h`.
#[derive(Debug, Clone)]
pub struct ExpStepper {
    grid: Grid,
    h: f64,
    decay: Vec<f64>,
    w1: Vec<f64>,
    w2: Vec<f64>,
    // Weights for ∫_0^h u ds under the same linear-in-time flux model.
    q1: Vec<f64>,
    q2: Vec<f64>,
    q3: Vec<f64>,
}

/// Result of one step: the new state and `∫_{t}^{t+h} u ds`.
pub struct StepOutput {
    pub u: Spectrum,
    pub integral: Spectrum,
}

impl ExpStepper {
    pub fn new(grid: &Grid, alpha: f64, nu: f64, h: f64) -> Self {
        let n = grid.n_modes();
        let mut s = Self {
            grid: grid.clone(),
            h,
            decay: Vec::with_capacity(n),
            w1: Vec::with_capacity(n),
            w2: Vec::with_capacity(n),
            q1: Vec::with_capacity(n),
            q2: Vec::with_capacity(n),
            q3: Vec::with_capacity(n),
        };
        for &k in grid.wavenumbers() {
            let lambda = k.abs().powf(alpha) + nu * k * k;
            let z = -lambda * h;
            let (p1, p2, p3) = (phi(1, z), phi(2, z), phi(3, z));
            s.decay.push(z.exp());
            s.w1.push(h * p1);
            s.w2.push(h * p2);
            s.q1.push(h * p1);
            s.q2.push(h * h * p2);
            s.q3.push(h * h * p3);
        }
        s
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Advance `u` from `t` to `t + h`. `rhs(t, u)` returns the spectrum of the
    /// non-stiff part `F`.
    pub fn step(
        &self,
        t: f64,
        u: &Spectrum,
        rhs: &impl Fn(f64, &Spectrum) -> Spectrum,
    ) -> StepOutput {
        let f0 = rhs(t, u);
        let stage: Vec<Complex64> = (0..u.coeffs().len())
            .map(|i| self.decay[i] * u.coeffs()[i] + self.w1[i] * f0.coeffs()[i])
            .collect();
        let stage = Spectrum::from_raw(&self.grid, stage);
        let f1 = rhs(t + self.h, &stage);
        let n = u.coeffs().len();
        let mut next = Vec::with_capacity(n);
        let mut integral = Vec::with_capacity(n);
        for i in 0..n {
            let df = f1.coeffs()[i] - f0.coeffs()[i];
            next.push(stage.coeffs()[i] + self.w2[i] * df);
            integral.push(
                self.q1[i] * u.coeffs()[i] + self.q2[i] * f0.coeffs()[i] + self.q3[i] * df,
            );
        }
        StepOutput {
            u: Spectrum::from_raw(&self.grid, next),
            integral: Spectrum::from_raw(&self.grid, integral),
        }
    }
}
