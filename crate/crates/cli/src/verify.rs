use antsys::engine::Engine;
use antsys::verify::verify_engine_round;
use antsys::{DepositKernel, DepositStrategy, RunConfig};

use crate::args::VerifyArgs;
use crate::error::CliError;
use crate::{load_problem, precheck};

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    if !(args.tolerance.is_finite() && args.tolerance >= 0.0) {
        return Err(CliError::Config(format!(
            "tolerance must be finite and >= 0, got {}",
            args.tolerance
        )));
    }
    let theta = args.params.theta;
    let config = RunConfig {
        parameters: args.params.parameters(args.seed),
        selection: args.selection.strategy(theta),
        deposit: DepositStrategy::Accumulate,
        workers: args.params.workers(),
        placement: args.params.placement.into(),
        instance_path: args.instance.clone(),
    };
    precheck(&config)?;
    let problem = load_problem(&args.instance)?;
    let name = problem.name().to_string();
    let mut engine = Engine::new(problem, &config)?;
    let all = DepositStrategy::all(theta);
    let kernels: Vec<&dyn DepositKernel> = all.iter().map(|s| s as &dyn DepositKernel).collect();
    let report = verify_engine_round(&mut engine, config.parameters.rho, &kernels, args.tolerance)?;

    println!("{name}: {} ants, seed {}, theta {theta}", engine.ant_count(), args.seed);
    for k in &report.kernels {
        let verdict = if k.pass() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} ledger {}: global loads {} (predicted {}), symmetric {}",
            k.strategy, k.measured.global_loads, k.predicted.global_loads, k.symmetric
        );
    }
    for p in &report.pairs {
        let verdict = if p.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {} vs {}: max difference {:e} at ({}, {})",
            p.first, p.second, p.max_diff, p.worst_cell.0, p.worst_cell.1
        );
    }
    if report.pass() {
        return Ok(());
    }
    let worst = report
        .pairs
        .iter()
        .max_by(|a, b| a.max_diff.total_cmp(&b.max_diff))
        .expect("four kernels give six pairs");
    let suspect = report
        .suspect()
        .map_or_else(|| "undetermined".to_string(), |s| s.to_string());
    Err(CliError::Verify(format!(
        "deposit strategies disagree: worst difference {:e} at ({}, {}) between {} and {}; suspect {suspect}",
        worst.max_diff, worst.worst_cell.0, worst.worst_cell.1, worst.first, worst.second
    )))
}
