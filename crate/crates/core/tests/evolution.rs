use num_complex::Complex64;
use proptest::prelude::*;

use fraburgers::evolution::{
    integrate, integrate_linear, manufactured_errors, observed_orders, EvolutionError,
};
use fraburgers::spectral::{forward, l2_norm, random_band_spectrum, Grid, RealField, Spectrum};
use fraburgers::Params;

fn params(alpha: f64, dt: f64, t_end: f64) -> Params {
    Params {
        alpha,
        eps: 0.1,
        rho: 1.0,
        nu: 0.0,
        dt,
        t_end,
    }
}

fn peak_scaled(s: Spectrum, peak: f64) -> Spectrum {
    let m = fraburgers::spectral::inverse(&s).max_abs();
    s.scaled(peak / m)
}

#[test]
fn tiny_amplitude_follows_the_linear_semigroup() {
    // At amplitude 1e-9 the quadratic term sits below round-off relative to u.
    let g = Grid::new(64, 3.0).unwrap();
    let k = std::f64::consts::PI * 2.0 / 3.0;
    let c = Complex64::new(0.0, -0.5e-9);
    let u0 = Spectrum::single_mode(&g, 2, c).unwrap();
    let z = Spectrum::zeros(&g);
    let p = params(1.3, 0.01, 2.0);
    let (traj, _) = integrate(&u0, &z, &p, 10).unwrap();
    for s in traj.samples() {
        let want = c * (-s.t * k.powf(1.3)).exp();
        let got = s.u.coeff(2);
        assert!((got - want).norm() <= 1e-8 * want.norm(), "t={} {got} vs {want}", s.t);
    }
}

#[test]
fn manufactured_solution_is_second_order() {
    let g = Grid::two_pi(64).unwrap();
    for (alpha, nu) in [(1.1, 0.0), (1.4, 0.0), (1.2, 0.05)] {
        let p = Params {
            nu,
            ..params(alpha, 0.04, 1.0)
        };
        let e = manufactured_errors(&g, &p, &[0.04, 0.02, 0.01]).unwrap();
        for q in observed_orders(&e) {
            assert!(q >= 1.9, "alpha {alpha} nu {nu}: order {q} from {e:?}");
        }
    }
}

#[test]
fn unforced_energy_decreases() {
    let g = Grid::new(256, 8.0).unwrap();
    let u0 = peak_scaled(random_band_spectrum(&g, 4, 0.5, 10.0).unwrap(), 0.8);
    let z = Spectrum::zeros(&g);
    let (_, ledger) = integrate(&u0, &z, &params(1.2, 0.01, 10.0), 1).unwrap();
    for w in ledger.rows.windows(2) {
        assert!(w[1].l2_sq <= w[0].l2_sq * (1.0 + 1e-13), "{} -> {}", w[0].l2_sq, w[1].l2_sq);
    }
    assert!(ledger.all_ok());
}

#[test]
fn mean_is_conserved_and_real_structure_kept() {
    let g = Grid::new(128, 2.0).unwrap();
    let x0 = RealField::from_fn(&g, |x| 0.3 + 0.4 * (std::f64::consts::PI * x / 2.0).sin()).unwrap();
    let u0 = forward(&x0);
    let f = random_band_spectrum(&g, 6, 1.0, 10.0).unwrap().scaled(0.05);
    let (traj, ledger) = integrate(&u0, &f, &params(1.2, 0.01, 5.0), 10).unwrap();
    let m0 = ledger.rows[0].mean;
    assert!((m0 - 0.3 * 4.0).abs() < 1e-12);
    for r in &ledger.rows {
        assert!((r.mean - m0).abs() < 1e-9, "{} vs {m0}", r.mean);
    }
    for s in traj.samples() {
        assert!(s.u.hermitian_defect() <= 1e-12 * s.u.coeff_norm().max(1.0));
    }
}

#[test]
fn forced_ledger_holds() {
    let g = Grid::new(512, 4.0).unwrap();
    for seed in 0..3 {
        let u0 = peak_scaled(random_band_spectrum(&g, seed, 1.0, 30.0).unwrap(), 0.5);
        let f = random_band_spectrum(&g, 100 + seed, 1.0, 30.0).unwrap().scaled(0.02);
        let (_, ledger) = integrate(&u0, &f, &params(1.1 + 0.1 * seed as f64, 0.005, 10.0), 10).unwrap();
        assert!(ledger.all_ok(), "seed {seed}: {:?}", ledger.violations().next());
    }
}

#[test]
fn vanishing_viscosity_limit() {
    let g = Grid::new(256, 2.0).unwrap();
    let u0 = peak_scaled(random_band_spectrum(&g, 21, 1.0, 12.0).unwrap(), 0.6);
    let f = random_band_spectrum(&g, 22, 1.0, 12.0).unwrap().scaled(0.05);
    let base = params(1.2, 0.005, 2.0);
    let end = |nu: f64| {
        let (traj, ledger) = integrate(&u0, &f, &base.with_nu(nu), 100).unwrap();
        assert!(ledger.all_ok());
        traj.last().unwrap().u.clone()
    };
    let reference = end(0.0);
    let gaps: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&nu| l2_norm(&end(nu).sub(&reference).unwrap()))
        .collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    // The gap is first order in ν.
    assert!(gaps[0] / gaps[1] > 5.0 && gaps[1] / gaps[2] > 5.0, "{gaps:?}");
}

#[test]
fn frozen_transport_ledger_holds_for_small_coefficient() {
    let g = Grid::new(128, 2.0).unwrap();
    let v = random_band_spectrum(&g, 31, 1.0, 10.0).unwrap().scaled(0.01);
    let f = random_band_spectrum(&g, 32, 1.0, 10.0).unwrap().scaled(0.1);
    let (traj, ledger) = integrate_linear(&v, &f, &params(1.2, 0.01, 5.0), 10).unwrap();
    assert!(ledger.all_ok());
    assert!(l2_norm(&traj.last().unwrap().u) < l2_norm(&f));
}

#[test]
fn oversized_step_is_rejected() {
    let g = Grid::new(256, 1.0).unwrap();
    let u0 = peak_scaled(random_band_spectrum(&g, 1, 1.0, 20.0).unwrap(), 2.0);
    let z = Spectrum::zeros(&g);
    let err = integrate(&u0, &z, &params(1.2, 0.05, 1.0), 1).unwrap_err();
    assert!(matches!(err, EvolutionError::Cfl { .. }), "{err}");
}

#[test]
fn non_real_datum_is_rejected() {
    let g = Grid::new(32, 1.0).unwrap();
    let mut raw = vec![Complex64::new(0.0, 0.0); 32];
    raw[1] = Complex64::new(1.0, 0.0);
    let u0 = Spectrum::new(&g, raw).unwrap();
    let err = integrate(&u0, &Spectrum::zeros(&g), &params(1.2, 0.01, 0.1), 1).unwrap_err();
    assert!(matches!(err, EvolutionError::NotHermitian { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ledger_holds_for_random_data(seed in 0u64..10_000, alpha in 1.05f64..1.45, amp in 0.0f64..0.8) {
        let g = Grid::new(64, 2.0).unwrap();
        let u0 = peak_scaled(random_band_spectrum(&g, seed, 1.0, 10.0).unwrap(), amp.max(1e-6));
        let f = random_band_spectrum(&g, seed + 1, 1.0, 10.0).unwrap().scaled(0.05);
        let (traj, ledger) = integrate(&u0, &f, &params(alpha, 0.01, 1.0), 5).unwrap();
        prop_assert!(ledger.all_ok());
        prop_assert!(traj.samples().iter().all(|s| s.u.hermitian_defect() <= 1e-12 * s.u.coeff_norm().max(1.0)));
    }
}
