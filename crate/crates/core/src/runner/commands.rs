use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::Coefficient;
use super::output::{CordobaRow, CsvRow};
use super::{forcing_band, verify_suite, Context, Failure};
use crate::analysis::{
    cordoba_check, decay_experiment, fit_threshold_constant, level_set_energy, linf_bound_check,
    split_diagnostic, stability_experiment, threshold_scaling, DecayWindow,
};
use crate::evolution::{integrate, Trajectory};
use crate::spectral::{
    inverse, l2_norm, random_band_spectrum, sobolev_norm, Spectrum,
};
use crate::steady::{
    picard_solve_from, steady_via_time_integral, uniqueness_probe, IterationTrace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Steady,
    Decay,
    Stability,
    Degiorgi,
    Verify,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Evolve,
        Command::Steady,
        Command::Decay,
        Command::Stability,
        Command::Degiorgi,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Steady => "steady",
            Command::Decay => "decay",
            Command::Stability => "stability",
            Command::Degiorgi => "degiorgi",
            Command::Verify => "verify",
        }
    }

    /// Commands whose solvers only run behind a passed smallness gate.
    pub fn gate_first(self) -> bool {
        matches!(self, Command::Steady | Command::Decay | Command::Stability)
    }
}

pub(crate) fn dispatch(command: Command, ctx: &mut Context) -> Result<(), Failure> {
    match command {
        Command::Evolve => evolve(ctx),
        Command::Steady => steady(ctx),
        Command::Decay => decay(ctx),
        Command::Stability => stability(ctx),
        Command::Degiorgi => degiorgi(ctx),
        Command::Verify => verify(ctx),
    }
}

fn write_rows<R: CsvRow>(ctx: &mut Context, name: &str, rows: &[R]) -> Result<(), Failure> {
    let r = ctx.out.write_rows(name, rows);
    ctx.io(r)
}

fn plot(ctx: &mut Context, name: &str, pts: Vec<(f64, f64)>) -> Result<(), Failure> {
    let r = ctx.out.plot(name, pts);
    ctx.io(r)
}

fn write_trajectory(ctx: &mut Context, name: &str, traj: &Trajectory) -> Result<(), Failure> {
    if !ctx.cfg.output.trajectory {
        return Ok(());
    }
    let r = ctx.out.write_trajectory(name, traj);
    ctx.io(r)
}

/// Random datum on `[lo, hi]` with peak value `amplitude`.
fn random_datum(ctx: &Context, seed: u64, amplitude: f64, (lo, hi): (f64, f64)) -> Result<Spectrum, Failure> {
    if amplitude == 0.0 {
        return Ok(Spectrum::zeros(&ctx.grid));
    }
    let s = random_band_spectrum(&ctx.grid, seed, lo, hi).map_err(Failure::config)?;
    let peak = inverse(&s).max_abs();
    Ok(s.scaled(amplitude / peak))
}

fn evolve(ctx: &mut Context) -> Result<(), Failure> {
    let e = ctx.cfg.evolve;
    let band = forcing_band(&ctx.cfg.forcing, &ctx.grid, &ctx.params).map_err(Failure::config)?;
    let u0 = random_datum(ctx, e.u0_seed, e.u0_amplitude, band)?;
    let f = ctx.forcing.clone();
    let (p, stride) = (ctx.params, ctx.cfg.output.stride);
    let (traj, ledger) = ctx
        .phase("integrate", |_| integrate(&u0, &f, &p, stride))
        .map_err(Failure::numerical)?;
    write_rows(ctx, "ledger.csv", &ledger.rows)?;
    write_trajectory(ctx, "trajectory.csv", &traj)?;
    plot(ctx, "ledger_l2.dat", ledger.rows.iter().map(|r| (r.t, r.l2_sq)).collect())?;
    plot(ctx, "ledger_bound.dat", ledger.rows.iter().map(|r| (r.t, r.bound_rhs)).collect())?;

    let util = ledger.max_utilisation();
    ctx.check("energy_ledger", ledger.all_ok(), util, 1.0 + crate::evolution::LEDGER_RTOL, "max lhs/bound_rhs");
    let mean0 = ledger.rows[0].mean;
    let drift = ledger
        .rows
        .iter()
        .map(|r| (r.mean - mean0).abs() / (1.0 + r.t))
        .fold(0.0, f64::max);
    ctx.check("mean_conservation", drift <= 1e-9, drift, 1e-9, "max |mean - mean0| / (1 + t)");
    let herm = traj
        .samples()
        .iter()
        .map(|s| s.u.hermitian_defect() / s.u.coeff_norm().max(1.0))
        .fold(0.0, f64::max);
    ctx.check("hermitian", herm <= 1e-12, herm, 1e-12, "");
    let monotone = ledger
        .rows
        .windows(2)
        .all(|w| w[1].diss_acc >= w[0].diss_acc && w[1].visc_acc >= w[0].visc_acc);
    ctx.check("dissipation_nondecreasing", monotone, 0.0, 0.0, "");
    Ok(())
}

/// Picard solve shared by steady, decay and stability.
fn solve_steady(ctx: &mut Context) -> Result<(Spectrum, IterationTrace), Failure> {
    let s = ctx.cfg.steady;
    let f = ctx.forcing.clone();
    let p = ctx.params;
    let zero = Spectrum::zeros(&ctx.grid);
    let (u, trace) = ctx
        .phase("picard", |_| picard_solve_from(&f, &zero, &p, s.tol, s.max_iter))
        .map_err(Failure::numerical)?;
    let tol = s.tol;
    let ratio = trace.max_ratio_from(2).unwrap_or(0.0);
    ctx.check("picard_contraction", ratio <= 0.6, ratio, 0.6, "max ratio for i >= 2");
    let h_max = trace.rows.iter().map(|r| r.h_half_norm).fold(0.0, f64::max);
    ctx.check(
        "iterate_bound",
        trace.within_bound(),
        h_max,
        trace.bound * (1.0 + crate::steady::BOUND_RTOL),
        "max ||U^i||_{H^{a/2}}",
    );
    let res = trace.final_residual().unwrap_or(0.0);
    ctx.check("residual", res <= 10.0 * tol, res, 10.0 * tol, "");
    ctx.check("zero_mode", u.mean_coeff().norm() == 0.0, u.mean_coeff().norm(), 0.0, "");
    ctx.metric("picard_iterations", trace.iterations() as f64);
    ctx.metric("steady_l2", l2_norm(&u));
    Ok((u, trace))
}

fn steady(ctx: &mut Context) -> Result<(), Failure> {
    let s = ctx.cfg.steady;
    let (u, trace) = solve_steady(ctx)?;
    write_rows(ctx, "trace.csv", &trace.rows)?;
    let xs: Vec<f64> = ctx.grid.points().collect();
    let field = inverse(&u);
    let r = ctx.out.write_field("steady.csv", &xs, field.values());
    ctx.io(r)?;
    plot(ctx, "trace_increment.dat", trace.rows.iter().map(|r| (r.i as f64, r.increment_norm)).collect())?;
    plot(ctx, "steady.dat", xs.iter().copied().zip(field.values().iter().copied()).collect())?;

    let f = ctx.forcing.clone();
    let p = ctx.params;
    if s.dual_route {
        let u_l2 = l2_norm(&u);
        let tail_tol = if u_l2 > 0.0 { s.tail_rtol * u_l2 } else { s.tol };
        let pt = p.with_t_end(s.horizon);
        let route = ctx
            .phase("time_integral", |_| steady_via_time_integral(&u, &f, &pt, tail_tol))
            .map_err(Failure::numerical)?;
        let gap = l2_norm(&route.field.sub(&u).map_err(Failure::numerical)?);
        let limit = (1e-4 * u_l2).max(10.0 * (s.tol + tail_tol));
        ctx.check("dual_route", gap <= limit, gap, limit, "||U_picard - U_time_integral||_{L2}");
        ctx.metric("dual_route_relative", if u_l2 > 0.0 { gap / u_l2 } else { 0.0 });
        ctx.metric("time_integral_horizon", route.horizon);
    }
    if s.n_perturb > 0 {
        let probe = ctx
            .phase("uniqueness_probe", |_| {
                uniqueness_probe(&u, &f, &p, s.n_perturb, s.tol, s.max_iter, s.probe_seed)
            })
            .map_err(Failure::numerical)?;
        write_rows(ctx, "probe.csv", &probe.outcomes)?;
        ctx.check("probe_failures", probe.failures() == 0, probe.failures() as f64, 0.0, "");
        ctx.check("probe_spread", probe.spread <= 10.0 * s.tol, probe.spread, 10.0 * s.tol, "");
    }
    Ok(())
}

fn decay(ctx: &mut Context) -> Result<(), Failure> {
    let d = ctx.cfg.decay;
    let v = match d.coefficient {
        Coefficient::Zero => Spectrum::zeros(&ctx.grid),
        Coefficient::Steady => solve_steady(ctx)?.0,
    };
    let p = ctx.params;
    let gamma = p.decay_exponent();
    ctx.check("decay_exponent_exceeds_one", gamma > 1.0, gamma, 1.0, "3/(2 alpha) - eps/2");
    let window = DecayWindow { t_a: d.t_a, t_b: d.t_b };
    let (vf, ff) = (inverse(&v), ctx.forcing_field());
    let stride = ctx.cfg.output.stride;
    let (report, traj) = ctx
        .phase("decay", |_| decay_experiment(&vf, &ff, &p, window, stride))
        .map_err(Failure::numerical)?;
    let split = split_diagnostic(&traj, &p);
    write_rows(ctx, "decay.csv", &report.samples)?;
    write_rows(ctx, "split.csv", &split.rows)?;
    write_trajectory(ctx, "trajectory.csv", &traj)?;
    plot(ctx, "decay_l2.dat", report.samples.iter().map(|r| (r.t, r.l2)).collect())?;
    plot(ctx, "decay_bound.dat", report.samples.iter().map(|r| (r.t, r.bound)).collect())?;

    let worst = report
        .samples
        .iter()
        .filter(|r| r.bound > 0.0)
        .map(|r| r.l2 / r.bound)
        .fold(0.0, f64::max);
    ctx.check("decay_bound", report.all_ok(), worst, 1.0 + crate::analysis::DECAY_SLACK, "max l2/bound");
    let defect = split.partition_defect();
    ctx.check("mode_partition", defect <= 1e-12, defect, 1e-12, "");
    ctx.metric("window_t_a", report.window.t_a);
    ctx.metric("window_t_b", report.window.t_b);
    ctx.metric("predicted_exponent", gamma);
    if let Some(e) = report.fit_exponent {
        ctx.metric("fit_exponent", e);
    }
    Ok(())
}

fn stability(ctx: &mut Context) -> Result<(), Failure> {
    let s = ctx.cfg.stability;
    let (u, _) = solve_steady(ctx)?;
    let (lo, hi) = forcing_band(&ctx.cfg.forcing, &ctx.grid, &ctx.params).map_err(Failure::config)?;
    let raw = random_band_spectrum(&ctx.grid, s.theta_seed, lo, hi).map_err(Failure::config)?;
    let theta = raw.scaled(s.theta_frac * l2_norm(&u) / l2_norm(&raw));
    let f = ctx.forcing.clone();
    let p = ctx.params;
    let stride = ctx.cfg.output.stride;
    let report = ctx
        .phase("stability", |_| stability_experiment(&u, &theta, &f, &p, stride))
        .map_err(Failure::numerical)?;
    write_rows(ctx, "stability.csv", &report.rows)?;
    plot(ctx, "stability_w.dat", report.rows.iter().map(|r| (r.t, r.w_l2_sq.sqrt())).collect())?;

    let util = report
        .rows
        .iter()
        .filter(|r| r.bound > 0.0)
        .map(|r| r.lhs / r.bound)
        .fold(0.0, f64::max);
    ctx.check("stability_ledger", report.ledger_ok(), util, 1.0 + crate::evolution::LEDGER_RTOL, "max lhs/||theta||^2");
    ctx.check(
        "perturbation_monotone",
        report.monotone,
        report.max_step_growth,
        crate::analysis::MONOTONE_TOL,
        "largest one-step growth of ||w||",
    );
    ctx.check("final_ratio", report.final_ratio <= s.target_ratio, report.final_ratio, s.target_ratio, "||w(T)|| / ||theta||");
    ctx.check("steady_small", report.steady_small(), report.steady_h_half, 1.0 / 3.0, "||U||_{H^{a/2}}");
    Ok(())
}

fn degiorgi(ctx: &mut Context) -> Result<(), Failure> {
    let d = ctx.cfg.degiorgi;
    let band = (ctx.grid.k_min(), d.u0_k_max_frac * ctx.grid.k_max());
    let u0 = random_datum(ctx, d.u0_seed, d.u0_amplitude, band)?;
    let f = ctx.forcing.clone();
    let p = ctx.params.with_t_end(d.t0);
    let stride = d.stride;
    let alpha = p.alpha;
    let (traj, _) = ctx
        .phase("integrate", |_| integrate(&u0, &f, &p, stride))
        .map_err(Failure::numerical)?;
    let ff = inverse(&f);
    let (c, report) = ctx
        .phase("level_sets", |_| {
            let c = fit_threshold_constant(&traj, d.t0, d.n_max, &ff, alpha, d.target)?;
            let e0 = level_set_energy(&traj, d.t0, 0.0, 0, &ff, alpha, d.pair_rtol)?.e0();
            let m = c * threshold_scaling(e0, d.t0, l2_norm(&f));
            level_set_energy(&traj, d.t0, m, d.n_max, &ff, alpha, d.pair_rtol).map(|r| (c, r))
        })
        .map_err(Failure::numerical)?;
    write_rows(ctx, "levels.csv", &report.rows)?;
    write_rows(ctx, "pairs.csv", &report.pairs)?;
    write_trajectory(ctx, "trajectory.csv", &traj)?;
    plot(ctx, "levels.dat", report.rows.iter().map(|r| (r.n as f64, r.e_n)).collect())?;

    let violations = report.violations().count();
    let worst = report
        .pairs
        .iter()
        .map(|q| q.lhs - q.rhs)
        .fold(f64::NEG_INFINITY, f64::max);
    ctx.check("level_set_inequality", violations == 0, worst, report.pair_tol, "max lhs - rhs");
    ctx.check("levels_decreasing", report.is_decreasing(1e-12), 0.0, 1e-12, "");
    let last = report.last_ratio();
    ctx.check("last_level_small", last <= d.target, last, d.target, "E_nmax / E_0");
    ctx.metric("threshold_constant", c);
    ctx.metric("threshold_m", report.m);
    ctx.metric("e0", report.e0());

    let u0f = inverse(&u0);
    let linf = linf_bound_check(&traj, &u0f, &ff, alpha).map_err(Failure::numerical)?;
    write_rows(ctx, "linf.csv", &linf.rows)?;
    ctx.check("linf_ratio_finite", linf.max_ratio.is_finite(), linf.max_ratio, f64::INFINITY, "");
    ctx.metric("linf_max_ratio", linf.max_ratio);

    let rows = cordoba_family(ctx, d.cordoba_pairs, d.u0_seed)?;
    write_rows(ctx, "cordoba.csv", &rows)?;
    let worst = rows.iter().map(|r| r.rhs - r.lhs - r.tol).fold(f64::NEG_INFINITY, f64::max);
    ctx.check("cordoba_family", rows.iter().all(|r| r.ok), worst, 0.0, "max rhs - lhs - tol");
    Ok(())
}

/// Seeded `(u, λ)` pairs with the tolerance `1e-8 ‖u‖²_{H^{α/2}}`.
pub(crate) fn cordoba_family(ctx: &Context, count: usize, seed: u64) -> Result<Vec<CordobaRow>, Failure> {
    let grid = &ctx.grid;
    let alpha = ctx.params.alpha;
    let mut out = Vec::with_capacity(count);
    for sample in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sample as u64 + 1);
        let key: u64 = rng.gen();
        let s = random_band_spectrum(grid, key, grid.k_min(), grid.dealias_cutoff() / 2.0)
            .map_err(Failure::numerical)?;
        let u = inverse(&s);
        let lambda = rng.gen_range(u.min()..u.max());
        let pair = cordoba_check(&u, lambda, alpha);
        let h = sobolev_norm(&s, alpha / 2.0, false).map_err(Failure::numerical)?;
        let tol = 1e-8 * h * h;
        out.push(CordobaRow {
            sample,
            lambda,
            lhs: pair.lhs,
            rhs: pair.rhs,
            tol,
            ok: pair.lhs >= pair.rhs - tol,
        });
    }
    Ok(out)
}

fn verify(ctx: &mut Context) -> Result<(), Failure> {
    let v = ctx.cfg.verify;
    let (grid, p) = (ctx.grid.clone(), ctx.params);
    let outcome = ctx
        .phase("verify", |_| verify_suite(&grid, &p, v.seed, v.family_size))
        .map_err(Failure::numerical)?;
    write_rows(ctx, "invariants.csv", &outcome.invariants)?;
    write_rows(ctx, "ratios.csv", &outcome.ratios)?;
    for row in &outcome.invariants {
        ctx.check(&row.name, row.passed, row.worst, row.tolerance, "");
    }
    ctx.metric("max_embedding_ratio", outcome.maxima.embedding);
    ctx.metric("max_interpolation_ratio", outcome.maxima.interpolation);
    ctx.metric("max_product_ratio", outcome.maxima.product);
    Ok(())
}
