use serde::Serialize;

/// Which a priori bound the `lhs`/`bound_rhs` columns encode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LedgerBound {
    /// Forced equation: `‖u‖² + ∫‖Λ^{α/2}u‖² ≤ ‖u₀‖² + 4t‖Λ^{-α/2}f‖²`.
    Forced,
    /// Frozen-coefficient equation started from `f`:
    /// `sup_s ‖u(s)‖² + (4/3)∫‖Λ^{α/2}u‖² ≤ ‖f‖²_X`.
    FrozenTransport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LedgerRow {
    pub t: f64,
    /// `‖u(t)‖²_{L²}`
    pub l2_sq: f64,
    /// `∫_0^t ‖Λ^{α/2}u‖² ds`
    pub diss_acc: f64,
    /// `ν ∫_0^t ‖u_x‖² ds`
    pub visc_acc: f64,
    pub bound_rhs: f64,
    /// `∫ u dx`
    pub mean: f64,
    pub lhs: f64,
    pub ok: bool,
}

/// Relative slack allowed in the ledger inequality.
pub const LEDGER_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyLedger {
    pub bound: LedgerBound,
    pub rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &LedgerRow> {
        self.rows.iter().filter(|r| !r.ok)
    }

    /// Largest `lhs / bound_rhs` over rows with a positive bound.
    pub fn max_utilisation(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.bound_rhs > 0.0)
            .map(|r| r.lhs / r.bound_rhs)
            .fold(0.0, f64::max)
    }
}

/// Running accumulator for the ledger integrals (trapezoid in time).
#[derive(Debug, Clone)]
pub(crate) struct LedgerAccumulator {
    pub bound: LedgerBound,
    pub u0_l2_sq: f64,
    /// `‖Λ^{-α/2}f‖²` for the forced bound, `‖f‖²_X` for the frozen one.
    pub bound_data: f64,
    pub diss_acc: f64,
    pub visc_acc: f64,
    pub sup_l2_sq: f64,
    last: Option<(f64, f64, f64)>,
}

impl LedgerAccumulator {
    pub fn new(bound: LedgerBound, u0_l2_sq: f64, bound_data: f64) -> Self {
        Self {
            bound,
            u0_l2_sq,
            bound_data,
            diss_acc: 0.0,
            visc_acc: 0.0,
            sup_l2_sq: 0.0,
            last: None,
        }
    }

    /// Feed the instantaneous `(t, ‖u‖², ‖Λ^{α/2}u‖², ν‖u_x‖²)`.
    pub fn push(&mut self, t: f64, l2_sq: f64, diss: f64, visc: f64) {
        if let Some((t0, d0, v0)) = self.last {
            let h = t - t0;
            self.diss_acc += 0.5 * h * (d0 + diss);
            self.visc_acc += 0.5 * h * (v0 + visc);
        }
        self.last = Some((t, diss, visc));
        self.sup_l2_sq = self.sup_l2_sq.max(l2_sq);
    }

    pub fn row(&self, t: f64, l2_sq: f64, mean: f64) -> LedgerRow {
        let (lhs, bound_rhs) = match self.bound {
            LedgerBound::Forced => (
                l2_sq + self.diss_acc,
                self.u0_l2_sq + 4.0 * t * self.bound_data,
            ),
            LedgerBound::FrozenTransport => (
                self.sup_l2_sq + 4.0 / 3.0 * self.diss_acc,
                self.bound_data,
            ),
        };
        LedgerRow {
            t,
            l2_sq,
            diss_acc: self.diss_acc,
            visc_acc: self.visc_acc,
            bound_rhs,
            mean,
            lhs,
            ok: lhs <= bound_rhs * (1.0 + LEDGER_RTOL),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_accumulation_is_exact_for_linear_integrands() {
        let mut acc = LedgerAccumulator::new(LedgerBound::Forced, 1.0, 0.0);
        for i in 0..=10 {
            let t = i as f64 * 0.1;
            acc.push(t, 1.0, 2.0 * t, 0.0);
        }
        assert!((acc.diss_acc - 1.0).abs() < 1e-14);
        let row = acc.row(1.0, 0.0, 0.0);
        assert_eq!(row.lhs, 1.0);
        assert!(row.ok);
    }

    #[test]
    fn frozen_bound_uses_running_supremum() {
        let mut acc = LedgerAccumulator::new(LedgerBound::FrozenTransport, 4.0, 5.0);
        acc.push(0.0, 4.0, 0.0, 0.0);
        acc.push(1.0, 1.0, 0.0, 0.0);
        let row = acc.row(1.0, 1.0, 0.0);
        assert_eq!(row.lhs, 4.0);
        assert!(row.ok);
    }
}
