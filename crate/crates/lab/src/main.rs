use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use poissonlab::config::ConfigFile;
use poissonlab::{run, LabError};

/// Block-occurrence Poisson experiments.
#[derive(Parser)]
#[command(name = "poissonlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Independent (x, w) pairs against the Poisson target.
    Annealed(Common),
    /// Fixed sequences x with random words.
    Quenched(Common),
    /// Exact small-scale checks.
    Oracle(Common),
    /// Exceedance frequencies against the concentration bound.
    Concentration(Common),
    /// Eta table, Delta norms and the analytic norm bound.
    Mixing(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(name: &str, args: &Common) -> Result<i32, LabError> {
    let file = ConfigFile::load(&args.config)?;
    if file.mode_name() != name {
        return Err(LabError::Config {
            path: "mode".into(),
            message: format!("config mode is `{}` but the subcommand is `{name}`", file.mode_name()),
        });
    }
    let cfg = file.to_experiment(args.seed)?;
    let outcome = run::run(&cfg)?;
    outcome.write(&args.out)?;
    println!("{}: {}", name, if outcome.pass { "PASS" } else { "FAIL" });
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Annealed(a) => ("annealed", a),
        Command::Quenched(a) => ("quenched", a),
        Command::Oracle(a) => ("oracle", a),
        Command::Concentration(a) => ("concentration", a),
        Command::Mixing(a) => ("mixing", a),
    };
    match execute(name, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(LabError::EXIT_CODE as u8)
        }
    }
}
