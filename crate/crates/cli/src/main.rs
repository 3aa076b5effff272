use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use defectfield_cli::error::CliError;
use defectfield_cli::run::{run_file, write_artifacts};
use defectfield_cli::scenario::{ScenarioFile, Task};

/// Distributional checks, point-source solutions and defect forces for planar elasticity.
///
/// Exit status: 0 when every verdict is satisfied, 1 when some verdict is not, 2 on errors.
#[derive(Parser)]
#[command(name = "defectfield", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory for report.txt, result.json and grid CSVs.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Div σ + b = 0 in the sense of distributions.
    CheckEquilibrium(Io),
    /// CurlCurl E = 0 in the sense of distributions.
    CheckCompatibility(Io),
    /// CurlCurl E = η.
    CheckIncompatibility(Io),
    /// Stress for point-supported body force and incompatibility.
    Solve(Io),
    /// Generalized force on a point defect.
    Force(Io),
    /// Scaling degree and degree of divergence.
    Sdeg(Io),
    /// Sample a field on a grid.
    Render(Io),
}

impl Command {
    fn split(self) -> (Task, Io) {
        match self {
            Command::CheckEquilibrium(io) => (Task::CheckEquilibrium, io),
            Command::CheckCompatibility(io) => (Task::CheckCompatibility, io),
            Command::CheckIncompatibility(io) => (Task::CheckIncompatibility, io),
            Command::Solve(io) => (Task::Solve, io),
            Command::Force(io) => (Task::Force, io),
            Command::Sdeg(io) => (Task::Sdeg, io),
            Command::Render(io) => (Task::Render, io),
        }
    }
}

fn run(task: Task, io: &Io) -> Result<bool, CliError> {
    let file = ScenarioFile::load(&io.scenario)?;
    let outcomes = run_file(&file, task)?;
    write_artifacts(&io.out, &outcomes)?;
    for o in &outcomes {
        print!("{}", o.text);
    }
    Ok(outcomes.iter().all(|o| o.ok()))
}

fn main() -> ExitCode {
    let (task, io) = Cli::parse().command.split();
    match run(task, &io) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
