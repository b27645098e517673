//! Time integration of the forced equation (with optional artificial viscosity)
//! and of the frozen-coefficient transport equation, with energy ledgers.

mod exponential;
mod flux;
mod ledger;
mod manufactured;

use std::ops::ControlFlow;

use thiserror::Error;

pub use exponential::{phi, ExpStepper, StepOutput};
pub use flux::{
    admissible_dt, nonlinear_flux, transport_flux, FnRhs, ForcedBurgers, FrozenTransport, Rhs,
};
pub use ledger::{EnergyLedger, LedgerBound, LedgerRow, LEDGER_RTOL};
pub use manufactured::{
    manufactured_errors, manufactured_exact, manufactured_forcing, observed_orders,
};

use crate::params::{Params, ParamsError};
use crate::spectral::{inverse, sobolev_norm_sq, RealField, SpectralError, Spectrum};
use ledger::LedgerAccumulator;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolutionError {
    #[error("time step {dt} exceeds the admissible {admissible} at t = {t}")]
    Cfl { dt: f64, admissible: f64, t: f64 },
    #[error("solution blew up after t = {last_healthy_t}")]
    BlowUp { last_healthy_t: f64 },
    #[error("initial data is not the spectrum of a real field (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("record stride must be at least 1")]
    ZeroStride,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Tolerance for accepting initial data as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub t: f64,
    pub u: Spectrum,
    pub params: Params,
}

/// One step of the forced equation `u_t + u u_x + Λ^α u - ν u_xx = f`.
pub fn step(state: &EvolutionState, f: &Spectrum) -> Result<EvolutionState, EvolutionError> {
    let p = &state.params;
    let rhs = ForcedBurgers::new(f.clone());
    check_cfl(&rhs, &state.u, p.dt, state.t)?;
    let stepper = ExpStepper::new(state.u.grid(), p.alpha, p.nu, p.dt);
    let out = stepper.step(state.t, &state.u, &|t, u| rhs.eval(t, u));
    if !out.u.is_finite() {
        return Err(EvolutionError::BlowUp {
            last_healthy_t: state.t,
        });
    }
    Ok(EvolutionState {
        t: state.t + p.dt,
        u: out.u,
        params: *p,
    })
}

fn check_cfl(rhs: &impl Rhs, u: &Spectrum, dt: f64, t: f64) -> Result<(), EvolutionError> {
    let admissible = admissible_dt(u.grid(), rhs.advection_speed(u));
    if dt > admissible * (1.0 + 1e-12) {
        return Err(EvolutionError::Cfl { dt, admissible, t });
    }
    Ok(())
}

/// What an observer sees after each completed step.
pub struct StepInfo<'a> {
    pub index: usize,
    pub t: f64,
    pub h: f64,
    pub u: &'a Spectrum,
    /// `∫ u ds` over the step just taken.
    pub integral: &'a Spectrum,
}

/// Advance `u0` to `horizon` with step `params.dt` (the last step is shortened
/// if needed), calling `observer` after every step. The observer can stop early.
pub fn drive<R: Rhs>(
    u0: &Spectrum,
    rhs: &R,
    params: &Params,
    horizon: f64,
    mut observer: impl FnMut(&StepInfo) -> ControlFlow<()>,
) -> Result<EvolutionState, EvolutionError> {
    let dt = params.dt;
    let full_steps = ((horizon / dt) * (1.0 + 1e-12)).floor() as usize;
    let remainder = horizon - full_steps as f64 * dt;
    let partial = remainder > 1e-12 * horizon.max(dt);
    let total = full_steps + usize::from(partial);

    let grid = u0.grid();
    let stepper = ExpStepper::new(grid, params.alpha, params.nu, dt);
    let tail = partial.then(|| ExpStepper::new(grid, params.alpha, params.nu, remainder));
    let eval = |t: f64, u: &Spectrum| rhs.eval(t, u);

    let mut u = u0.clone();
    let mut t = 0.0;
    for index in 1..=total {
        check_cfl(rhs, &u, dt, t)?;
        let (st, t_next) = if index <= full_steps {
            (&stepper, index as f64 * dt)
        } else {
            (tail.as_ref().expect("partial step"), horizon)
        };
        let out = st.step(t, &u, &eval);
        if !out.u.is_finite() {
            return Err(EvolutionError::BlowUp { last_healthy_t: t });
        }
        u = out.u;
        t = t_next;
        let info = StepInfo {
            index,
            t,
            h: st.h(),
            u: &u,
            integral: &out.integral,
        };
        if observer(&info).is_break() {
            break;
        }
    }
    Ok(EvolutionState {
        t,
        u,
        params: *params,
    })
}

/// Recorded states at the ledger stride.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub u: Spectrum,
}

impl Trajectory {
    pub fn new(samples: Vec<TrajectorySample>) -> Self {
        Self { samples }
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    /// `(t, u(t))` in physical space.
    pub fn fields(&self) -> impl Iterator<Item = (f64, RealField)> + '_ {
        self.samples.iter().map(|s| (s.t, inverse(&s.u)))
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }
}

struct Recorder {
    alpha: f64,
    nu: f64,
    stride: usize,
    length: f64,
    acc: LedgerAccumulator,
    rows: Vec<LedgerRow>,
    samples: Vec<TrajectorySample>,
}

impl Recorder {
    fn observe(&mut self, index: usize, t: f64, u: &Spectrum, force_record: bool) {
        let l2_sq = sobolev_norm_sq(u, 0.0, false).unwrap_or(f64::NAN);
        let diss = sobolev_norm_sq(u, self.alpha / 2.0, true).unwrap_or(f64::NAN);
        let visc = if self.nu > 0.0 {
            self.nu * sobolev_norm_sq(u, 1.0, true).unwrap_or(f64::NAN)
        } else {
            0.0
        };
        self.acc.push(t, l2_sq, diss, visc);
        if index % self.stride == 0 || force_record {
            let mean = u.mean_coeff().re * self.length;
            self.rows.push(self.acc.row(t, l2_sq, mean));
            self.samples.push(TrajectorySample { t, u: u.clone() });
        }
    }
}

fn ensure_hermitian(u: &Spectrum) -> Result<(), EvolutionError> {
    let defect = u.hermitian_defect();
    if defect > HERMITIAN_TOL * u.coeff_norm().max(1.0) {
        return Err(EvolutionError::NotHermitian { defect });
    }
    Ok(())
}

fn record_run<R: Rhs>(
    u0: &Spectrum,
    rhs: &R,
    params: &Params,
    stride: usize,
    acc: LedgerAccumulator,
) -> Result<(Trajectory, EnergyLedger), EvolutionError> {
    if stride == 0 {
        return Err(EvolutionError::ZeroStride);
    }
    let bound = acc.bound;
    let mut rec = Recorder {
        alpha: params.alpha,
        nu: params.nu,
        stride,
        length: u0.grid().length(),
        acc,
        rows: Vec::new(),
        samples: Vec::new(),
    };
    rec.observe(0, 0.0, u0, true);
    let horizon = params.t_end;
    drive(u0, rhs, params, horizon, |info| {
        let last = info.t >= horizon;
        rec.observe(info.index, info.t, info.u, last);
        ControlFlow::Continue(())
    })?;
    Ok((
        Trajectory::new(rec.samples),
        EnergyLedger {
            bound,
            rows: rec.rows,
        },
    ))
}

/// Integrate the forced equation to `params.t_end`.
///
/// Rows and samples are recorded every `stride` steps and at the final time. The
/// ledger `ok` column checks `‖u‖² + ∫‖Λ^{α/2}u‖² ≤ ‖u₀‖² + 4t‖Λ^{-α/2}f‖²`.
pub fn integrate(
    u0: &Spectrum,
    f: &Spectrum,
    params: &Params,
    stride: usize,
) -> Result<(Trajectory, EnergyLedger), EvolutionError> {
    params.validate()?;
    u0.grid().ensure_same(f.grid())?;
    ensure_hermitian(u0)?;
    ensure_hermitian(f)?;
    let f_neg = sobolev_norm_sq(f, -params.alpha / 2.0, true)?;
    let acc = LedgerAccumulator::new(
        LedgerBound::Forced,
        sobolev_norm_sq(u0, 0.0, false)?,
        f_neg,
    );
    record_run(u0, &ForcedBurgers::new(f.clone()), params, stride, acc)
}

/// Integrate `u_t + ½(V u)_x + Λ^α u = 0` from `u0` (normally `f`).
///
/// The ledger checks `sup ‖u‖² + (4/3)∫‖Λ^{α/2}u‖² ≤ ‖u₀‖²_X`; that bound is
/// only guaranteed when `V` satisfies the smallness condition.
pub fn integrate_linear(
    v: &Spectrum,
    u0: &Spectrum,
    params: &Params,
    stride: usize,
) -> Result<(Trajectory, EnergyLedger), EvolutionError> {
    params.validate()?;
    v.grid().ensure_same(u0.grid())?;
    ensure_hermitian(v)?;
    ensure_hermitian(u0)?;
    let x = crate::spectral::x_norm_spectrum(u0, params.alpha)?;
    let acc = LedgerAccumulator::new(
        LedgerBound::FrozenTransport,
        sobolev_norm_sq(u0, 0.0, false)?,
        x * x,
    );
    record_run(u0, &FrozenTransport::new(v), params, stride, acc)
}
