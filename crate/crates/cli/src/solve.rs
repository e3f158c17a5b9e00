use std::io::Write;

use antsys::engine::run_problem;
use antsys::RunConfig;

use crate::args::SolveArgs;
use crate::error::CliError;
use crate::{load_problem, precheck};

pub fn run(args: SolveArgs) -> Result<(), CliError> {
    let theta = args.params.theta;
    let config = RunConfig {
        parameters: args.params.parameters(args.seed),
        selection: args.selection.strategy(theta),
        deposit: args.deposit.strategy(theta),
        workers: args.params.workers(),
        placement: args.params.placement.into(),
        instance_path: args.instance.clone(),
    };
    precheck(&config)?;
    let problem = load_problem(&args.instance)?;
    let report = run_problem(problem, &config)?;

    let mut json = serde_json::to_string_pretty(&report).map_err(|e| CliError::io("cannot encode report", e))?;
    json.push('\n');
    let summary = format!(
        "{}: best length {} after {} iterations (seed {}); mean per iteration: construct {:.3} ms, update {:.3} ms",
        report.instance,
        report.best_length,
        report.per_iteration.len(),
        report.seed,
        report.mean_construct_ms(),
        report.mean_update_ms(),
    );
    match &args.out {
        Some(path) => {
            std::fs::write(path, json).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
            println!("{summary}");
            println!("report written to {}", path.display());
        }
        None => {
            std::io::stdout()
                .write_all(json.as_bytes())
                .map_err(|e| CliError::io("cannot write report", e))?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}
