//! Empirical ratios for the embedding, interpolation and product-rule estimates.
//!
//! Only finiteness and scale behaviour are meaningful here; the optimal constants
//! are not computed.

use serde::Serialize;

use super::norms::{dot_norm, lp_norm};
use super::ops::{forward, frac_laplacian, inverse};
use super::{RealField, SpectralError};

/// Exponents used for the three ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSettings {
    /// Lebesgue exponent for the embedding and interpolation ratios.
    pub p: f64,
    /// `σ` in the interpolation estimate.
    pub sigma: f64,
    /// Derivative order `s` in the product rule.
    pub product_order: f64,
}

impl RatioSettings {
    /// `p = 4`, `σ = α/2`, `s = 1 - α/2`: the combinations used by the steady estimates.
    pub fn for_alpha(alpha: f64) -> Self {
        Self {
            p: 4.0,
            sigma: alpha / 2.0,
            product_order: 1.0 - alpha / 2.0,
        }
    }

    /// `δ = 1/2 - 1/p`.
    pub fn embedding_order(&self) -> f64 {
        0.5 - 1.0 / self.p
    }

    /// Interpolation weight `a` solving `1/p = a/2 + (1-a)(1/2 - σ)`.
    pub fn interpolation_weight(&self) -> Option<f64> {
        if self.sigma <= 0.0 {
            return None;
        }
        let a = (self.sigma - self.embedding_order()) / self.sigma;
        (0.0..=1.0).contains(&a).then_some(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    /// `‖f‖_{L^p} / ‖Λ^δ f‖_{L²}`; `None` for non-mean-zero samples.
    pub embedding: Option<f64>,
    /// `‖f‖_{L^p} / (‖f‖^a_{L²} ‖Λ^σ f‖^{1-a}_{L²})`.
    pub interpolation: Option<f64>,
    /// `‖Λ^s(fg)‖_{L²} / (‖Λ^s f‖_{L²}‖g‖_{L^∞} + ‖f‖_{L^∞}‖Λ^s g‖_{L²})`.
    pub product: Option<f64>,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    let r = num / den;
    (den > f64::MIN_POSITIVE && r.is_finite()).then_some(r)
}

pub fn inequality_ratios(
    f: &RealField,
    g: &RealField,
    settings: &RatioSettings,
) -> Result<RatioReport, SpectralError> {
    f.grid().ensure_same(g.grid())?;
    let fs = forward(f);
    let gs = forward(g);
    let lp = lp_norm(f, settings.p)?;

    let embedding = if fs.is_mean_zero() {
        ratio(lp, dot_norm(&fs, settings.embedding_order())?)
    } else {
        None
    };

    let interpolation = settings.interpolation_weight().and_then(|a| {
        let l2 = dot_norm(&fs, 0.0).ok()?;
        let top = dot_norm(&fs, settings.sigma).ok()?;
        ratio(lp, l2.powf(a) * top.powf(1.0 - a))
    });

    let s = settings.product_order;
    let fg = forward(&f.mul(g)?);
    let lhs = dot_norm(&fg, s)?;
    let den = dot_norm(&fs, s)? * g.max_abs() + f.max_abs() * dot_norm(&gs, s)?;
    let product = ratio(lhs, den);

    Ok(RatioReport {
        embedding,
        interpolation,
        product,
    })
}

/// Largest finite value of each ratio over a family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RatioMaxima {
    pub embedding: f64,
    pub interpolation: f64,
    pub product: f64,
}

impl RatioMaxima {
    pub fn absorb(&mut self, r: &RatioReport) {
        if let Some(v) = r.embedding {
            self.embedding = self.embedding.max(v);
        }
        if let Some(v) = r.interpolation {
            self.interpolation = self.interpolation.max(v);
        }
        if let Some(v) = r.product {
            self.product = self.product.max(v);
        }
    }

    pub fn all_finite(&self) -> bool {
        self.embedding.is_finite() && self.interpolation.is_finite() && self.product.is_finite()
    }
}

/// `Λ^s f` back in physical space; used by callers that need the field itself.
pub fn lambda_field(f: &RealField, order: f64) -> Result<RealField, SpectralError> {
    Ok(inverse(&frac_laplacian(&forward(f), order)?))
}
