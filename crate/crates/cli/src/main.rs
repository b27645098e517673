use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fraburgers::runner::{run, Command, RunOptions};

#[derive(Parser)]
#[command(name = "fraburgers", version, about = "Pseudospectral lab for the forced fractal Burgers equation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Integrate the forced equation and record the energy ledger.
    Evolve(RunArgs),
    /// Solve for the steady state by Picard iteration, with cross-checks.
    Steady(RunArgs),
    /// Measure algebraic decay of the frozen-coefficient problem.
    Decay(RunArgs),
    /// Track a perturbation of the steady state.
    Stability(RunArgs),
    /// Level-set energies and truncation checks.
    Degiorgi(RunArgs),
    /// Discretisation invariants and norm-ratio families.
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: $FRABURGERS_OUT/<command> or runs/<command>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the solver even when the smallness gate fails.
    #[arg(long)]
    override_gate: bool,
    /// Also write two-column .dat files for plotting.
    #[arg(long)]
    emit_plots: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Evolve(a) => (Command::Evolve, a),
        Sub::Steady(a) => (Command::Steady, a),
        Sub::Decay(a) => (Command::Decay, a),
        Sub::Stability(a) => (Command::Stability, a),
        Sub::Degiorgi(a) => (Command::Degiorgi, a),
        Sub::Verify(a) => (Command::Verify, a),
    };
    let opts = RunOptions {
        config_path: args.config,
        out: args.out,
        override_gate: args.override_gate,
        emit_plots: args.emit_plots,
    };
    let outcome = run(command, &opts);
    let m = &outcome.manifest;
    for c in &m.checks {
        println!(
            "{:<28} {}  value={:.6e} limit={:.6e}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.value,
            c.limit
        );
    }
    if let Some(e) = &m.error {
        eprintln!("error: {e}");
    }
    println!("{} -> {} ({})", command.name(), m.status, outcome.out_dir.display());
    ExitCode::from(outcome.exit.code() as u8)
}
