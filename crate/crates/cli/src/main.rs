mod args;
mod bench;
mod error;
mod solve;
mod verify;

use std::path::Path;
use std::process::ExitCode;

use antsys::tsplib::parse_instance;
use antsys::{ConfigError, ProblemInstance, RunConfig};
use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Verify(args) => verify::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Checks everything about `config` that does not depend on the instance, so
/// flag mistakes are reported before any file is read.
pub(crate) fn precheck(config: &RunConfig) -> Result<(), ConfigError> {
    config.validate(usize::MAX)
}

pub(crate) fn load_problem(path: &Path) -> Result<ProblemInstance, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    let spec = parse_instance(&bytes).map_err(|e| CliError::io(path.display(), e))?;
    ProblemInstance::from_spec(&spec).map_err(|e| CliError::io(path.display(), e))
}
