use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::{
    DecayRow, LevelRow, LinfRow, PairCheck, SplitRow, StabilityRow,
};
use crate::evolution::{LedgerRow, Trajectory};
use crate::spectral::{inverse, RatioReport};
use crate::steady::{ProbeOutcome, TraceRow};

/// Full-precision float: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// A report row with a fixed, named column set.
pub trait CsvRow {
    fn header() -> Vec<&'static str>;
    fn record(&self) -> Vec<String>;
}

macro_rules! csv_row {
    ($ty:ty { $($field:ident : $kind:ident),* $(,)? }) => {
        impl CsvRow for $ty {
            fn header() -> Vec<&'static str> {
                vec![$(stringify!($field)),*]
            }
            fn record(&self) -> Vec<String> {
                vec![$(csv_row!(@cell $kind, self.$field)),*]
            }
        }
    };
    (@cell f, $v:expr) => { fmt_f64($v) };
    (@cell opt, $v:expr) => { fmt_opt($v) };
    (@cell int, $v:expr) => { $v.to_string() };
    (@cell optint, $v:expr) => { $v.map(|x| x.to_string()).unwrap_or_default() };
    (@cell dbg, $v:expr) => { format!("{:?}", $v) };
    (@cell text, $v:expr) => { $v.clone().unwrap_or_default() };
}

csv_row!(LedgerRow { t: f, l2_sq: f, diss_acc: f, visc_acc: f, bound_rhs: f, mean: f, lhs: f, ok: int });
csv_row!(TraceRow { i: int, increment_norm: f, ratio: opt, residual: f, h_half_norm: f });
csv_row!(DecayRow { t: f, l2: f, bound: f, ok: int });
csv_row!(SplitRow { t: f, g: f, low_energy: f, high_energy: f, total: f });
csv_row!(StabilityRow { t: f, w_l2_sq: f, diss_acc: f, lhs: f, bound: f, ok: int });
csv_row!(LevelRow { n: int, lambda_n: f, t_n: f, e_plus: f, e_minus: f, e_n: f });
csv_row!(PairCheck { n: int, side: dbg, t1: f, lhs: f, rhs: f, ok: int });
csv_row!(LinfRow { t: f, linf: f, scale: f, ratio: f });
csv_row!(RatioReport { embedding: opt, interpolation: opt, product: opt });
csv_row!(ProbeOutcome { restart: int, seed_norm: f, iterations: optint, distance: opt, failure: text });

/// One row of the Córdoba family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CordobaRow {
    pub sample: usize,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    pub ok: bool,
}

csv_row!(CordobaRow { sample: int, lambda: f, lhs: f, rhs: f, tol: f, ok: int });

/// One invariant of the verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRow {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CsvRow for InvariantRow {
    fn header() -> Vec<&'static str> {
        vec!["name", "worst", "tolerance", "passed"]
    }
    fn record(&self) -> Vec<String> {
        vec![
            self.name.clone(),
            fmt_f64(self.worst),
            fmt_f64(self.tolerance),
            self.passed.to_string(),
        ]
    }
}

/// Owns a run directory; every artifact of a run is written through it.
#[derive(Debug)]
pub struct RunDir {
    root: PathBuf,
    emit_plots: bool,
    written: Vec<String>,
}

impl RunDir {
    pub fn create(root: &Path, emit_plots: bool) -> std::io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            emit_plots,
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn emit_plots(&self) -> bool {
        self.emit_plots
    }

    /// Names of the files written so far, in order.
    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> std::io::Result<()> {
        fs::write(self.root.join(name), text)?;
        self.note(name);
        Ok(())
    }

    fn note(&mut self, name: &str) {
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
    }

    pub fn write_rows<R: CsvRow>(&mut self, name: &str, rows: &[R]) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(self.root.join(name))?;
        w.write_record(R::header())?;
        for r in rows {
            w.write_record(r.record())?;
        }
        w.flush()?;
        self.note(name);
        Ok(())
    }

    /// `t, v0, …, v{n-1}` with physical values of each sample.
    pub fn write_trajectory(&mut self, name: &str, traj: &Trajectory) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(self.root.join(name))?;
        let n = traj.samples().first().map_or(0, |s| s.u.grid().n_modes());
        let mut header = vec!["t".to_string()];
        header.extend((0..n).map(|j| format!("v{j}")));
        w.write_record(&header)?;
        for s in traj.samples() {
            let mut rec = vec![fmt_f64(s.t)];
            rec.extend(inverse(&s.u).values().iter().map(|&v| fmt_f64(v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        self.note(name);
        Ok(())
    }

    /// `x, value` columns for a field on the grid.
    pub fn write_field(&mut self, name: &str, xs: &[f64], values: &[f64]) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(self.root.join(name))?;
        w.write_record(["x", "value"])?;
        for (x, v) in xs.iter().zip(values) {
            w.write_record([fmt_f64(*x), fmt_f64(*v)])?;
        }
        w.flush()?;
        self.note(name);
        Ok(())
    }

    /// Two-column whitespace file for gnuplot; skipped unless plots are on.
    pub fn plot(&mut self, name: &str, points: impl IntoIterator<Item = (f64, f64)>) -> std::io::Result<()> {
        if !self.emit_plots {
            return Ok(());
        }
        let mut text = String::new();
        for (x, y) in points {
            text.push_str(&format!("{} {}\n", fmt_f64(x), fmt_f64(y)));
        }
        self.write_text(name, &text)
    }
}
