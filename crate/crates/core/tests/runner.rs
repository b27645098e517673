use std::fs;
use std::path::{Path, PathBuf};

use fraburgers::runner::{
    generate_forcing, resolve_out_dir, run, Command, Config, ExitCategory, RunOptions, OUT_ENV,
};

const BASE: &str = r#"
[grid]
n_modes = 128
half_period_pi = 2.0

[params]
alpha = 1.2
eps = 0.1
rho = 1.0
dt = 0.01
t_end = 40.0

[forcing]
seed = 7
target = "auto-gate"
margin = 0.8

[output]
stride = 5
trajectory = true

[steady]
horizon = 2000.0
n_perturb = 3

[decay]
t_a = 0.05
"#;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.toml");
    fs::write(&p, text).unwrap();
    p
}

fn opts(config: PathBuf, out: PathBuf) -> RunOptions {
    RunOptions {
        config_path: config,
        out: Some(out),
        override_gate: false,
        emit_plots: false,
    }
}

fn csv_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    v.sort();
    v
}

#[test]
fn every_command_passes_on_the_base_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BASE);
    for command in Command::ALL {
        let out = tmp.path().join(command.name());
        let r = run(command, &opts(cfg.clone(), out.clone()));
        let failed: Vec<_> = r.manifest.checks.iter().filter(|c| !c.passed).collect();
        assert_eq!(r.exit, ExitCategory::Passed, "{}: {failed:?} {:?}", command.name(), r.manifest.error);
        assert!(out.join("manifest.toml").exists());
        for a in &r.manifest.artifacts {
            assert!(out.join(a).exists(), "{a} listed but missing");
        }
    }
    assert!(tmp.path().join("verify/ratios.csv").exists());
}

#[test]
fn gate_failure_stops_before_any_solver() {
    let tmp = tempfile::tempdir().unwrap();
    let text = BASE.replace("target = \"auto-gate\"", "target = 5.0");
    let cfg = write_config(tmp.path(), &text);
    for command in [Command::Steady, Command::Decay, Command::Stability] {
        let out = tmp.path().join(command.name());
        let r = run(command, &opts(cfg.clone(), out.clone()));
        assert_eq!(r.exit, ExitCategory::GateFailed);
        assert_eq!(r.exit.code(), 3);
        let gate = r.manifest.check("smallness_gate").unwrap();
        assert!(!gate.passed);
        assert!(r.manifest.timings.is_empty(), "a solver phase ran");
        assert!(csv_files(&out).is_empty());
        let text = fs::read_to_string(out.join("manifest.toml")).unwrap();
        assert!(text.contains("status = \"gate-failed\""));
    }
}

#[test]
fn override_flag_runs_the_solver_and_is_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let text = BASE.replace("target = \"auto-gate\"", "target = 0.01");
    let cfg = write_config(tmp.path(), &text);
    let out = tmp.path().join("o");
    let mut o = opts(cfg, out.clone());
    o.override_gate = true;
    let r = run(Command::Steady, &o);
    assert!(r.manifest.override_gate);
    assert!(!r.manifest.smallness.unwrap().passed);
    assert!(out.join("trace.csv").exists());
    let text = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(text.contains("override_gate = true"));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BASE);
    for command in [Command::Evolve, Command::Steady, Command::Degiorgi, Command::Verify] {
        let a = tmp.path().join(format!("{}_a", command.name()));
        let b = tmp.path().join(format!("{}_b", command.name()));
        run(command, &opts(cfg.clone(), a.clone()));
        run(command, &opts(cfg.clone(), b.clone()));
        let files = csv_files(&a);
        assert!(!files.is_empty());
        for f in files {
            let name = f.file_name().unwrap();
            assert_eq!(fs::read(&f).unwrap(), fs::read(b.join(name)).unwrap(), "{name:?} differs");
        }
    }
}

#[test]
fn decay_and_steady_share_the_forcing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BASE);
    let d = run(Command::Decay, &opts(cfg.clone(), tmp.path().join("d")));
    let s = run(Command::Steady, &opts(cfg, tmp.path().join("s")));
    assert_eq!(d.manifest.forcing, s.manifest.forcing);
    assert_eq!(d.manifest.smallness, s.manifest.smallness);
    // Regenerating from the echoed config gives the same coefficients.
    let c1 = Config::from_toml(&d.manifest.config_echo).unwrap();
    let c2 = Config::from_toml(&s.manifest.config_echo).unwrap();
    let g = c1.grid.build().unwrap();
    let f1 = generate_forcing(&c1.forcing, &g, &c1.params).unwrap();
    let f2 = generate_forcing(&c2.forcing, &g, &c2.params).unwrap();
    assert_eq!(f1.coeffs(), f2.coeffs());
}

#[test]
fn csv_headers_name_every_column() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BASE);
    for command in Command::ALL {
        let out = tmp.path().join(command.name());
        run(command, &opts(cfg.clone(), out.clone()));
        for f in csv_files(&out) {
            let mut rd = csv::Reader::from_path(&f).unwrap();
            let header = rd.headers().unwrap().clone();
            assert!(header.iter().all(|h| !h.trim().is_empty()), "{f:?}");
            for rec in rd.records() {
                assert_eq!(rec.unwrap().len(), header.len(), "{f:?}");
            }
        }
    }
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BASE);
    let out = tmp.path().join("e");
    run(Command::Evolve, &opts(cfg, out.clone()));
    let text = fs::read_to_string(out.join("ledger.csv")).unwrap();
    let row = text.lines().nth(2).unwrap();
    let l2 = row.split(',').nth(1).unwrap();
    let mantissa = l2.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{l2}");
}

#[test]
fn config_errors_map_to_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let unknown = write_config(tmp.path(), &format!("{BASE}\n[output2]\nx = 1\n"));
    let r = run(Command::Verify, &opts(unknown, tmp.path().join("a")));
    assert_eq!(r.exit.code(), 2);
    assert!(r.manifest.error.is_some());

    let typo = BASE.replace("stride = 5", "strid = 5");
    let r = run(Command::Verify, &opts(write_config(tmp.path(), &typo), tmp.path().join("b")));
    assert_eq!(r.exit, ExitCategory::Config);

    let bad_alpha = BASE.replace("alpha = 1.2", "alpha = 2.5");
    let r = run(Command::Evolve, &opts(write_config(tmp.path(), &bad_alpha), tmp.path().join("c")));
    assert_eq!(r.exit, ExitCategory::Config);

    let low_rho = BASE.replace("rho = 1.0", "rho = 0.1");
    let r = run(Command::Evolve, &opts(write_config(tmp.path(), &low_rho), tmp.path().join("d")));
    assert_eq!(r.exit, ExitCategory::Config);
}

#[test]
fn missing_config_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run(Command::Verify, &opts(tmp.path().join("nope.toml"), tmp.path().join("o")));
    assert_eq!(r.exit, ExitCategory::Io);
    assert_eq!(r.exit.code(), 5);
}

#[test]
fn step_size_violation_is_numerical() {
    let tmp = tempfile::tempdir().unwrap();
    let text = BASE
        .replace("dt = 0.01", "dt = 0.5")
        .replace("[output]", "[evolve]\nu0_amplitude = 1.0\n\n[output]");
    let r = run(Command::Evolve, &opts(write_config(tmp.path(), &text), tmp.path().join("o")));
    assert_eq!(r.exit, ExitCategory::Numerical);
    assert_eq!(r.exit.code(), 4);
    assert!(r.manifest.error.as_deref().unwrap().contains("time step"));
}

#[test]
fn plots_only_on_request() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), BASE);
    let plain = tmp.path().join("plain");
    run(Command::Evolve, &opts(cfg.clone(), plain.clone()));
    let mut o = opts(cfg, tmp.path().join("plots"));
    o.emit_plots = true;
    run(Command::Evolve, &o);
    let has_dat = |d: &Path| {
        fs::read_dir(d)
            .unwrap()
            .any(|e| e.unwrap().path().extension().is_some_and(|x| x == "dat"))
    };
    assert!(!has_dat(&plain));
    assert!(has_dat(&tmp.path().join("plots")));
}

#[test]
fn output_root_resolution() {
    let explicit = resolve_out_dir(Command::Decay, Some(Path::new("x/y")));
    assert_eq!(explicit, PathBuf::from("x/y"));
    std::env::set_var(OUT_ENV, "/tmp/fraburgers-root");
    assert_eq!(
        resolve_out_dir(Command::Decay, None),
        PathBuf::from("/tmp/fraburgers-root/decay")
    );
    std::env::remove_var(OUT_ENV);
    assert_eq!(resolve_out_dir(Command::Steady, None), PathBuf::from("runs/steady"));
}
