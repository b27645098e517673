use serde::Serialize;

use super::AnalysisError;
use crate::evolution::Trajectory;
use crate::spectral::{forward, inverse, RealField, Spectrum};

/// `E_n` windows must hold at least this many samples.
pub const MIN_WINDOW_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `(u − λ)_+`
    Plus,
    /// `(u + λ)_− = max(−(u + λ), 0)`
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];

    fn apply(self, v: f64, lambda: f64) -> f64 {
        match self {
            Side::Plus => (v - lambda).max(0.0),
            Side::Minus => (-(v + lambda)).max(0.0),
        }
    }
}

/// Pointwise level-set truncation.
pub fn truncate(u: &RealField, lambda: f64, side: Side) -> RealField {
    let values = u.values().iter().map(|&v| side.apply(v, lambda)).collect();
    RealField::new(u.grid(), values).expect("truncation keeps values finite")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CordobaPair {
    /// `∫ Λ^α u · (u − λ)_+ dx`
    pub lhs: f64,
    /// `‖Λ^{α/2}(u − λ)_+‖²`
    pub rhs: f64,
}

pub fn cordoba_check(u: &RealField, lambda: f64, alpha: f64) -> CordobaPair {
    let us = forward(u);
    let hs = forward(&truncate(u, lambda, Side::Plus));
    let len = u.grid().length();
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for ((a, b), &k) in us.coeffs().iter().zip(hs.coeffs()).zip(u.grid().wavenumbers()) {
        let w = k.abs().powf(alpha);
        lhs += w * (a * b.conj()).re;
        rhs += w * b.norm_sqr();
    }
    CordobaPair {
        lhs: lhs * len,
        rhs: rhs * len,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRow {
    pub n: usize,
    pub lambda_n: f64,
    pub t_n: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// `e_plus + e_minus`
    pub e_n: f64,
}

/// Both sides of the level-set energy inequality on `[t1, t0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCheck {
    pub n: usize,
    pub side: Side,
    pub t1: f64,
    /// `‖u_λ(t0)‖² + 2∫‖Λ^{α/2}u_λ‖²`
    pub lhs: f64,
    /// `‖u_λ(t1)‖² + 2∫∫ f u_λ`
    pub rhs: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSetReport {
    pub m: f64,
    pub t0: f64,
    pub rows: Vec<LevelRow>,
    pub pairs: Vec<PairCheck>,
    /// Absolute slack used for the pair checks.
    pub pair_tol: f64,
}

impl LevelSetReport {
    pub fn e0(&self) -> f64 {
        self.rows.first().map_or(0.0, |r| r.e_n)
    }

    pub fn violations(&self) -> impl Iterator<Item = &PairCheck> {
        self.pairs.iter().filter(|p| !p.ok)
    }

    /// `E_{n+1} ≤ E_n + rtol·E₀` for every `n`, on each side and in total.
    pub fn is_decreasing(&self, rtol: f64) -> bool {
        let slack = rtol * self.e0();
        self.rows.windows(2).all(|w| {
            w[1].e_plus <= w[0].e_plus + slack
                && w[1].e_minus <= w[0].e_minus + slack
                && w[1].e_n <= w[0].e_n + slack
        })
    }

    pub fn last_ratio(&self) -> f64 {
        let e0 = self.e0();
        match self.rows.last() {
            Some(r) if e0 > 0.0 => r.e_n / e0,
            _ => 0.0,
        }
    }
}

/// Per-sample quantities for one truncation level.
struct LevelSeries {
    a: Vec<f64>,
    d: Vec<f64>,
    g: Vec<f64>,
}

fn level_series(
    window: &[(f64, &Spectrum)],
    lambda: f64,
    side: Side,
    f: &RealField,
    alpha: f64,
) -> LevelSeries {
    let mut s = LevelSeries {
        a: Vec::with_capacity(window.len()),
        d: Vec::with_capacity(window.len()),
        g: Vec::with_capacity(window.len()),
    };
    for (_, u) in window {
        let h = truncate(&inverse(u), lambda, side);
        let hs = forward(&h);
        let len = h.grid().length();
        let mut d = 0.0;
        for (c, &k) in hs.coeffs().iter().zip(h.grid().wavenumbers()) {
            d += k.abs().powf(alpha) * c.norm_sqr();
        }
        let dx = h.grid().dx();
        s.a.push(h.values().iter().map(|v| v * v).sum::<f64>() * dx);
        s.d.push(d * len);
        s.g.push(f.values().iter().zip(h.values()).map(|(a, b)| a * b).sum::<f64>() * dx);
    }
    s
}

/// Running trapezoid integral of `y` on the sample times.
fn cumulative(times: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(y.len());
    let mut acc = 0.0;
    for i in 0..y.len() {
        if i > 0 {
            acc += 0.5 * (times[i] - times[i - 1]) * (y[i] + y[i - 1]);
        }
        out.push(acc);
    }
    out
}

fn window_samples(traj: &Trajectory, from: f64, to: f64) -> Vec<(f64, &Spectrum)> {
    let eps = 1e-12 * to.max(1.0);
    traj.samples()
        .iter()
        .filter(|s| s.t >= from - eps && s.t <= to + eps)
        .map(|s| (s.t, &s.u))
        .collect()
}

fn energy(series: &LevelSeries, times: &[f64]) -> f64 {
    let sup = series.a.iter().copied().fold(0.0, f64::max);
    let diss = cumulative(times, &series.d).last().copied().unwrap_or(0.0);
    sup + 2.0 * diss
}

fn validate(traj: &Trajectory, t0: f64, m: f64, n_max: usize) -> Result<(), AnalysisError> {
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!("t0 must be positive, got {t0}")));
    }
    if !(m >= 0.0 && m.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!("M must be nonnegative, got {m}")));
    }
    let last = traj.last().map_or(f64::NEG_INFINITY, |s| s.t);
    if last < t0 * (1.0 - 1e-12) {
        return Err(AnalysisError::InvalidArgument(format!(
            "trajectory ends at {last}, before t0 = {t0}"
        )));
    }
    let from = t0 * (1.0 - 0.5f64.powi(n_max as i32));
    let samples = window_samples(traj, from, t0).len();
    if samples < MIN_WINDOW_SAMPLES {
        return Err(AnalysisError::StrideTooCoarse {
            from,
            to: t0,
            samples,
            needed: MIN_WINDOW_SAMPLES,
        });
    }
    Ok(())
}

/// De Giorgi energies `E_n` for `λ_n = M(1 − 2^{-n})`, `T_n = t0(1 − 2^{-n})`,
/// `n = 0..=n_max`, on both truncation sides, plus the level-set energy
/// inequality for every `(n, t1)` with `t1` a sample in `[T_n, t0)`.
///
/// Time integrals use the trapezoid rule on the recorded samples. Pair checks
/// allow an absolute slack of `pair_rtol · E₀`.
pub fn level_set_energy(
    traj: &Trajectory,
    t0: f64,
    m: f64,
    n_max: usize,
    f: &RealField,
    alpha: f64,
    pair_rtol: f64,
) -> Result<LevelSetReport, AnalysisError> {
    validate(traj, t0, m, n_max)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut series = Vec::new();
    for n in 0..=n_max {
        let scale = 1.0 - 0.5f64.powi(n as i32);
        let (lambda_n, t_n) = (m * scale, t0 * scale);
        let window = window_samples(traj, t_n, t0);
        let times: Vec<f64> = window.iter().map(|w| w.0).collect();
        let mut e = [0.0; 2];
        for (slot, side) in Side::BOTH.into_iter().enumerate() {
            let s = level_series(&window, lambda_n, side, f, alpha);
            e[slot] = energy(&s, &times);
            series.push((n, side, times.clone(), s));
        }
        rows.push(LevelRow {
            n,
            lambda_n,
            t_n,
            e_plus: e[0],
            e_minus: e[1],
            e_n: e[0] + e[1],
        });
    }
    let pair_tol = pair_rtol * rows[0].e_n;
    let mut pairs = Vec::new();
    for (n, side, times, s) in &series {
        let d_int = cumulative(times, &s.d);
        let g_int = cumulative(times, &s.g);
        let end = times.len() - 1;
        for i in 0..end {
            let lhs = s.a[end] + 2.0 * (d_int[end] - d_int[i]);
            let rhs = s.a[i] + 2.0 * (g_int[end] - g_int[i]);
            pairs.push(PairCheck {
                n: *n,
                side: *side,
                t1: times[i],
                lhs,
                rhs,
                ok: lhs <= rhs + pair_tol,
            });
        }
    }
    Ok(LevelSetReport {
        m,
        t0,
        rows,
        pairs,
        pair_tol,
    })
}

/// `E₀^{1/2} t0^{-1/2} + ‖f‖^{1/4}_{L²} E₀^{1/8}`, the threshold scaling for `M`.
pub fn threshold_scaling(e0: f64, t0: f64, f_l2: f64) -> f64 {
    (e0 / t0).sqrt() + f_l2.powf(0.25) * e0.powf(0.125)
}

/// Smallest constant `c` (to relative precision 1e-10) for which `M = c·S`
/// makes `E_{n_max} ≤ target · E₀`, `S` being [`threshold_scaling`].
pub fn fit_threshold_constant(
    traj: &Trajectory,
    t0: f64,
    n_max: usize,
    f: &RealField,
    alpha: f64,
    target: f64,
) -> Result<f64, AnalysisError> {
    if n_max == 0 {
        return Err(AnalysisError::InvalidArgument("n_max must be at least 1".into()));
    }
    validate(traj, t0, 0.0, n_max)?;
    let all = window_samples(traj, 0.0, t0);
    let all_times: Vec<f64> = all.iter().map(|w| w.0).collect();
    let e0: f64 = Side::BOTH
        .into_iter()
        .map(|side| energy(&level_series(&all, 0.0, side, f, alpha), &all_times))
        .sum();
    let f_l2 = f.values().iter().map(|v| v * v).sum::<f64>().sqrt() * f.grid().dx().sqrt();
    let scale = threshold_scaling(e0, t0, f_l2);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let frac = 1.0 - 0.5f64.powi(n_max as i32);
    let window = window_samples(traj, t0 * frac, t0);
    let times: Vec<f64> = window.iter().map(|w| w.0).collect();
    let last = |c: f64| -> f64 {
        Side::BOTH
            .into_iter()
            .map(|side| energy(&level_series(&window, c * scale * frac, side, f, alpha), &times))
            .sum()
    };
    let sup = window
        .iter()
        .map(|(_, u)| inverse(u).max_abs())
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0, (sup / (scale * frac)) * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    if last(lo) <= target * e0 {
        return Ok(0.0);
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if last(mid) <= target * e0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::TrajectorySample;
    use crate::spectral::Grid;

    #[test]
    fn truncation_examples() {
        let g = Grid::two_pi(64).unwrap();
        let u = RealField::from_fn(&g, |x| x.sin()).unwrap();
        assert_eq!(truncate(&u, 2.0, Side::Plus).max_abs(), 0.0);
        let pos = u.map(f64::abs).unwrap();
        assert_eq!(truncate(&pos, 0.0, Side::Plus), pos);
        let h = truncate(&u, 0.5, Side::Plus);
        for (x, v) in g.points().zip(h.values()) {
            assert_eq!(*v, (x.sin() - 0.5).max(0.0));
        }
        assert_eq!(truncate(&h, 0.0, Side::Plus), h);
        let m = truncate(&u, 0.5, Side::Minus);
        for (x, v) in g.points().zip(m.values()) {
            assert_eq!(*v, (-(x.sin() + 0.5)).max(0.0));
        }
    }

    #[test]
    fn cordoba_examples() {
        let g = Grid::two_pi(128).unwrap();
        let u = RealField::from_fn(&g, |x| x.sin()).unwrap();
        let above = cordoba_check(&u, 2.0, 1.2);
        assert_eq!((above.lhs, above.rhs), (0.0, 0.0));
        let below = cordoba_check(&u, -3.0, 1.2);
        assert!((below.lhs - below.rhs).abs() <= 1e-10);
        let half = cordoba_check(&u, 0.0, 1.2);
        let u_h = std::f64::consts::PI * 2f64.powf(0.6);
        assert!(half.lhs >= half.rhs - 1e-8 * u_h);
    }

    fn constant_trajectory(g: &Grid, amp: f64, n: usize) -> Trajectory {
        let u = forward(&RealField::from_fn(g, |x| amp * x.sin()).unwrap());
        Trajectory::new(
            (0..=n)
                .map(|i| TrajectorySample {
                    t: i as f64 / n as f64,
                    u: u.clone(),
                })
                .collect(),
        )
    }

    #[test]
    fn empty_level_sets_have_zero_energy() {
        let g = Grid::two_pi(32).unwrap();
        let traj = constant_trajectory(&g, 1.0, 64);
        let f = RealField::zeros(&g);
        let r = level_set_energy(&traj, 1.0, 3.0, 3, &f, 1.2, 1e-8).unwrap();
        assert!(r.rows[0].e_n > 0.0);
        assert_eq!(r.rows[0].lambda_n, 0.0);
        assert_eq!(r.rows[0].t_n, 0.0);
        for row in &r.rows[1..] {
            assert_eq!(row.e_n, 0.0);
        }
        assert!(r.is_decreasing(0.0));
    }

    #[test]
    fn coarse_stride_is_rejected() {
        let g = Grid::two_pi(32).unwrap();
        let traj = constant_trajectory(&g, 1.0, 10);
        let f = RealField::zeros(&g);
        assert!(matches!(
            level_set_energy(&traj, 1.0, 1.0, 4, &f, 1.2, 1e-8),
            Err(AnalysisError::StrideTooCoarse { .. })
        ));
    }

    #[test]
    fn fitted_constant_reaches_target() {
        let g = Grid::two_pi(32).unwrap();
        let traj = constant_trajectory(&g, 1.0, 64);
        let f = RealField::zeros(&g);
        let c = fit_threshold_constant(&traj, 1.0, 3, &f, 1.2, 1e-8).unwrap();
        assert!(c > 0.0);
        let e0 = level_set_energy(&traj, 1.0, 0.0, 3, &f, 1.2, 1e-8).unwrap().e0();
        let m = c * threshold_scaling(e0, 1.0, 0.0);
        let r = level_set_energy(&traj, 1.0, m, 3, &f, 1.2, 1e-8).unwrap();
        assert!(r.last_ratio() <= 1e-8);
        let below = level_set_energy(&traj, 1.0, 0.99 * m, 3, &f, 1.2, 1e-8).unwrap();
        assert!(below.last_ratio() > 1e-8);
    }
}
