use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("alpha = {alpha} must lie in (1, 3/2)")]
    AlphaOutOfRange { alpha: f64 },
    #[error("eps = {eps} must lie in (0, 1)")]
    EpsOutOfRange { eps: f64 },
    #[error("3 - 2α - αε = {denominator} must be positive (α = {alpha} < 3/(2+ε) = {limit})")]
    SchemeRange {
        alpha: f64,
        limit: f64,
        denominator: f64,
    },
    #[error("{name} = {value} must be {requirement}")]
    Invalid {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
}

/// Equation and scheme parameters.
///
/// `eps` is the small exponent loss in the admissible range `α < 3/(2+ε)`;
/// `nu` is the artificial viscosity coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub alpha: f64,
    pub eps: f64,
    pub rho: f64,
    #[serde(default)]
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
}

impl Params {
    /// Checks the ranges every solver needs.
    pub fn validate(&self) -> Result<(), ParamsError> {
        if !(self.alpha > 1.0 && self.alpha < 1.5) {
            return Err(ParamsError::AlphaOutOfRange { alpha: self.alpha });
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(ParamsError::EpsOutOfRange { eps: self.eps });
        }
        positive("rho", self.rho)?;
        positive("dt", self.dt)?;
        positive("t_end", self.t_end)?;
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(ParamsError::Invalid {
                name: "nu",
                value: self.nu,
                requirement: "nonnegative",
            });
        }
        Ok(())
    }

    /// The stricter range `α < 3/(2+ε)` under which the steady scheme is analysed.
    pub fn validate_scheme(&self) -> Result<(), ParamsError> {
        self.validate()?;
        let denominator = 3.0 - 2.0 * self.alpha - self.alpha * self.eps;
        if denominator <= 0.0 {
            return Err(ParamsError::SchemeRange {
                alpha: self.alpha,
                limit: 3.0 / (2.0 + self.eps),
                denominator,
            });
        }
        Ok(())
    }

    /// Algebraic decay exponent `3/(2α) - ε/2`.
    pub fn decay_exponent(&self) -> f64 {
        3.0 / (2.0 * self.alpha) - self.eps / 2.0
    }

    pub fn with_t_end(self, t_end: f64) -> Self {
        Self { t_end, ..self }
    }

    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    pub fn with_nu(self, nu: f64) -> Self {
        Self { nu, ..self }
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), ParamsError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ParamsError::Invalid {
            name,
            value,
            requirement: "positive and finite",
        })
    }
}
