use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use molqudit_cli::{run_command, CliError, Command, ExperimentConfig, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "molqudit", version, about = "Cavity-mediated gates between molecular spin qudits")]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Experiment description (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Continue when the dispersive margin is not above 1.
    #[arg(long, global = true)]
    force: bool,

    /// Resonance tolerance override, GHz.
    #[arg(long, global = true, value_name = "GHZ")]
    tol: Option<f64>,

    /// Fock cutoff override.
    #[arg(long, global = true, value_name = "N")]
    fock: Option<usize>,

    /// Worker threads.
    #[arg(long, global = true, env = "MOLQUDIT_THREADS", value_name = "K")]
    threads: Option<usize>,

    /// Molecule index for `levels`.
    #[arg(long, global = true, default_value_t = 0)]
    molecule: usize,

    /// Record the run time in the output header.
    #[arg(long, global = true)]
    timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Energy levels of one molecule against the swept field.
    Levels,
    /// Components of the effective coupling tensor.
    Tensor,
    /// Resonant two-molecule transitions.
    Resonances,
    /// Transition probability against time.
    Evolve,
    /// Gate time, peak and phase for resonant transitions.
    Gate,
    /// Resonance count and fastest gate against the swept field.
    Sweep,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let mut config = ExperimentConfig::load(path)?;
    if let Some(tol) = cli.tol {
        config.tolerances.resonance = tol;
    }
    if let Some(fock) = cli.fock {
        config.tolerances.fock_cutoff = fock;
    }
    config.validate()?;

    let command = match cli.command {
        Sub::Levels => Command::Levels,
        Sub::Tensor => Command::Tensor,
        Sub::Resonances => Command::Resonances,
        Sub::Evolve => Command::Evolve,
        Sub::Gate => Command::Gate,
        Sub::Sweep => Command::Sweep,
    };
    let options = RunOptions {
        force: cli.force,
        threads: cli.threads,
        timestamp: cli.timestamp,
        molecule: cli.molecule,
    };
    let table = run_command(command, &config, &options)?;
    if let Some(w) = table.meta("warning") {
        eprintln!("warning: {w}");
    }
    let csv = table.to_csv();
    match &cli.out {
        Some(p) => std::fs::write(p, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
