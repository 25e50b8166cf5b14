use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qfsieve::{run, Command, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Check the model constraints and report drift stability.
    Validate,
    /// Integrate the moment equations and write a trajectory CSV.
    Evolve,
    /// Locate the minimum-entropy-production initial state.
    Sieve,
    /// Write the full initial-rate landscape as CSV.
    Sweep,
    /// Sample the Wigner function of a trajectory state on a grid.
    Wigner,
}

#[derive(Debug, Parser)]
#[command(name = "qfsieve", version, about = "Gaussian open-oscillator dynamics and the predictability sieve")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override a config value: `--set evolve.dt=1e-3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = match args.command {
        Cmd::Validate => Command::Validate,
        Cmd::Evolve => Command::Evolve,
        Cmd::Sieve => Command::Sieve,
        Cmd::Sweep => Command::Sweep,
        Cmd::Wigner => Command::Wigner,
    };
    let result = RunConfig::load(&args.config, &args.overrides).and_then(|c| run(command, &c));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qfsieve: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
