//! Configuration, seeded forcing, run manifests, CSV persistence and the
//! subcommands behind the `fraburgers` binary.

mod commands;
pub mod config;
mod forcing;
mod manifest;
pub mod output;
mod verify;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use commands::Command;
pub use config::Config;
pub use forcing::{forcing_band, generate_forcing, target_x_norm, ForcingError};
pub use manifest::{CheckResult, ForcingEcho, GridEcho, Metric, RunManifest, Timing};
pub use output::{fmt_f64, CsvRow, RunDir};
pub use verify::{verify_suite, VerifyOutcome};

use crate::spectral::{inverse, x_norm_spectrum, Grid, Spectrum};
use crate::steady::{smallness_gate_spectrum, SmallnessReport};
use crate::Params;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "FRABURGERS_OUT";

/// Process exit codes by failure category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCategory {
    Passed = 0,
    ChecksFailed = 1,
    Config = 2,
    GateFailed = 3,
    Numerical = 4,
    Io = 5,
}

impl ExitCategory {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn status(self) -> &'static str {
        match self {
            Self::Passed => "passed",
            Self::ChecksFailed => "checks-failed",
            Self::Config => "config-error",
            Self::GateFailed => "gate-failed",
            Self::Numerical => "numerical-failure",
            Self::Io => "io-error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config_path: PathBuf,
    pub out: Option<PathBuf>,
    pub override_gate: bool,
    pub emit_plots: bool,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub exit: ExitCategory,
    pub manifest: RunManifest,
    pub out_dir: PathBuf,
}

/// `--out`, else `$FRABURGERS_OUT/<command>`, else `runs/<command>`.
pub fn resolve_out_dir(command: Command, out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => p.to_path_buf(),
        None => {
            let root = std::env::var_os(OUT_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("runs"));
            root.join(command.name())
        }
    }
}

/// Failure raised inside a subcommand body.
#[derive(Debug)]
pub(crate) struct Failure {
    pub category: ExitCategory,
    pub message: String,
}

impl Failure {
    pub fn numerical(e: impl std::fmt::Display) -> Self {
        Self {
            category: ExitCategory::Numerical,
            message: e.to_string(),
        }
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        Self {
            category: ExitCategory::Io,
            message: e.to_string(),
        }
    }

    pub fn config(e: impl std::fmt::Display) -> Self {
        Self {
            category: ExitCategory::Config,
            message: e.to_string(),
        }
    }
}

/// Shared state handed to every subcommand.
pub(crate) struct Context {
    pub cfg: Config,
    pub grid: Grid,
    pub params: Params,
    pub forcing: Spectrum,
    pub gate: Option<SmallnessReport>,
    pub out: RunDir,
    pub manifest: RunManifest,
}

impl Context {
    pub fn check(&mut self, name: &str, passed: bool, value: f64, limit: f64, detail: impl Into<String>) {
        self.manifest.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            value,
            limit,
            detail: detail.into(),
        });
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.manifest.metrics.push(Metric {
            name: name.to_string(),
            value,
        });
    }

    pub fn phase<T>(&mut self, name: &str, body: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = body(self);
        self.manifest.timings.push(Timing {
            phase: name.to_string(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    pub fn io<T>(&self, r: std::io::Result<T>) -> Result<T, Failure> {
        r.map_err(Failure::io)
    }

    pub fn forcing_field(&self) -> crate::spectral::RealField {
        inverse(&self.forcing)
    }

    fn write_manifest(&mut self) -> Result<(), Failure> {
        self.manifest.artifacts = self.out.written().to_vec();
        let text = self.manifest.to_toml();
        self.out.write_text("manifest.toml", &text).map_err(Failure::io)
    }
}

/// Run one subcommand end to end. The manifest is written before the solver
/// starts and rewritten when it finishes.
pub fn run(command: Command, opts: &RunOptions) -> RunOutcome {
    let out_dir = resolve_out_dir(command, opts.out.as_deref());
    let mut manifest = RunManifest::new(
        command.name(),
        &opts.config_path.display().to_string(),
        opts.override_gate,
    );
    let finish = |mut manifest: RunManifest, exit: ExitCategory, err: Option<String>| {
        manifest.status = exit.status().to_string();
        manifest.exit_code = exit.code();
        manifest.error = err;
        // Best effort: the manifest is the only record of early failures.
        if std::fs::create_dir_all(&out_dir).is_ok() {
            let _ = std::fs::write(out_dir.join("manifest.toml"), manifest.to_toml());
        }
        RunOutcome {
            exit,
            manifest,
            out_dir: out_dir.clone(),
        }
    };

    let text = match std::fs::read_to_string(&opts.config_path) {
        Ok(t) => t,
        Err(e) => return finish(manifest, ExitCategory::Io, Some(format!("reading config: {e}"))),
    };
    manifest.config_echo = text.clone();
    let prepared = prepare(&text, &mut manifest);
    let (cfg, grid, params, forcing) = match prepared {
        Ok(v) => v,
        Err(f) => return finish(manifest, f.category, Some(f.message)),
    };
    let out = match RunDir::create(&out_dir, opts.emit_plots) {
        Ok(o) => o,
        Err(e) => return finish(manifest, ExitCategory::Io, Some(e.to_string())),
    };
    let mut ctx = Context {
        gate: manifest.smallness,
        cfg,
        grid,
        params,
        forcing,
        out,
        manifest,
    };
    if let Err(f) = ctx.write_manifest() {
        return finish(ctx.manifest, f.category, Some(f.message));
    }

    if command.gate_first() {
        let passed = ctx.gate.is_some_and(|g| g.passed);
        let value = ctx.gate.map_or(f64::NAN, |g| g.gate_value);
        let detail = if passed {
            String::new()
        } else if opts.override_gate {
            "gate failed; solver run anyway on --override-gate".to_string()
        } else {
            "gate failed; no solver launched".to_string()
        };
        ctx.check("smallness_gate", passed || opts.override_gate, value, 1.0 / 3.0, detail);
        if !passed && !opts.override_gate {
            let _ = ctx.write_manifest();
            return finish(ctx.manifest, ExitCategory::GateFailed, None);
        }
    }

    let result = commands::dispatch(command, &mut ctx);
    let (exit, err) = match result {
        Ok(()) if ctx.manifest.all_checks_passed() => (ExitCategory::Passed, None),
        Ok(()) => (ExitCategory::ChecksFailed, None),
        Err(f) => (f.category, Some(f.message)),
    };
    ctx.manifest.status = exit.status().to_string();
    ctx.manifest.exit_code = exit.code();
    ctx.manifest.error = err.clone();
    if let Err(f) = ctx.write_manifest() {
        return finish(ctx.manifest, f.category, Some(f.message));
    }
    RunOutcome {
        exit,
        manifest: ctx.manifest,
        out_dir,
    }
}

type Prepared = (Config, Grid, Params, Spectrum);

fn prepare(text: &str, manifest: &mut RunManifest) -> Result<Prepared, Failure> {
    let cfg = Config::from_toml(text).map_err(Failure::config)?;
    let grid = cfg.grid.build().map_err(Failure::config)?;
    manifest.grid = Some(GridEcho {
        n_modes: grid.n_modes(),
        half_period: grid.half_period(),
        dx: grid.dx(),
    });
    let params = cfg.params;
    manifest.params = Some(params);
    params.validate().map_err(Failure::config)?;
    let forcing = generate_forcing(&cfg.forcing, &grid, &params).map_err(Failure::config)?;
    let (band_lo, band_hi) = forcing_band(&cfg.forcing, &grid, &params).map_err(Failure::config)?;
    manifest.forcing = Some(ForcingEcho {
        spec: cfg.forcing,
        band_lo,
        band_hi,
        x_norm: x_norm_spectrum(&forcing, params.alpha).map_err(Failure::config)?,
    });
    manifest.smallness = smallness_gate_spectrum(&forcing, &params).ok();
    Ok((cfg, grid, params, forcing))
}
