//! Strategy-grid benchmark.
//!
//! CSV columns, in order:
//! `instance,n,selection,deposit,theta,rep,iter,construct_ms,update_ms,best_len,global_loads,atomic_ops,schema_version`.
//! `theta` is empty when neither strategy of the row is tiled, `iter` is
//! zero-based, `best_len` is the best tour of that iteration, and the two
//! ledger columns count the deposit kernel only.

use std::fs::File;
use std::io::{self, Write};

use antsys::engine::Engine;
use antsys::{DepositStrategy, ProblemInstance, RunConfig, SelectionStrategy};
use serde::Serialize;

use crate::args::BenchArgs;
use crate::error::CliError;
use crate::{load_problem, precheck};

pub const SCHEMA_VERSION: u32 = 1;

/// One (selection, deposit) combination of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub selection: SelectionStrategy,
    pub deposit: DepositStrategy,
}

impl Cell {
    fn theta(&self) -> Option<usize> {
        self.selection.tile_size().or(self.deposit.tile_size())
    }
}

#[derive(Debug)]
pub struct BenchmarkPlan {
    pub instances: Vec<(String, ProblemInstance)>,
    pub cells: Vec<Cell>,
    pub repetitions: usize,
    pub base_seed: u64,
}

#[derive(Debug, Serialize)]
struct Row<'a> {
    instance: &'a str,
    n: usize,
    selection: &'static str,
    deposit: &'static str,
    theta: Option<usize>,
    rep: usize,
    iter: usize,
    construct_ms: String,
    update_ms: String,
    best_len: u64,
    global_loads: u64,
    atomic_ops: u64,
    schema_version: u32,
}

#[derive(Debug, Default)]
struct Summary {
    iterations: usize,
    construct_ms: f64,
    update_ms: f64,
    best: Option<u64>,
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Config("reps must be at least 1".into()));
    }
    let theta = args.params.theta;
    let mut cells: Vec<Cell> = Vec::new();
    for s in &args.selection {
        for d in &args.deposit {
            let cell = Cell {
                selection: s.strategy(theta),
                deposit: d.strategy(theta),
            };
            if !cells.contains(&cell) {
                cells.push(cell);
            }
        }
    }
    let template = RunConfig {
        parameters: args.params.parameters(args.seed),
        selection: cells[0].selection,
        deposit: cells[0].deposit,
        workers: args.params.workers(),
        placement: args.params.placement.into(),
        instance_path: args.instance[0].clone(),
    };
    precheck(&template)?;
    let instances = args
        .instance
        .iter()
        .map(|path| Ok((path.display().to_string(), load_problem(path)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let plan = BenchmarkPlan {
        instances,
        cells,
        repetitions: args.reps,
        base_seed: args.seed,
    };

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => {
            Box::new(File::create(path).map_err(|e| CliError::io(format!("cannot create {}", path.display()), e))?)
        }
        None => Box::new(io::stdout()),
    };
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    let mut table = Vec::new();

    for (path, problem) in &plan.instances {
        for cell in &plan.cells {
            let mut summary = Summary::default();
            for rep in 0..plan.repetitions {
                let mut config = template.clone();
                config.parameters.seed = plan.base_seed.wrapping_add(rep as u64);
                config.selection = cell.selection;
                config.deposit = cell.deposit;
                config.instance_path = path.into();
                let mut engine = Engine::new(problem.clone(), &config)?;
                let mut best = u64::MAX;
                for iter in 0..config.parameters.iterations {
                    let record = engine.run_iteration()?;
                    best = best.min(record.best_length);
                    summary.iterations += 1;
                    summary.construct_ms += record.construct_ms;
                    summary.update_ms += record.update_ms;
                    csv.serialize(Row {
                        instance: problem.name(),
                        n: problem.n(),
                        selection: cell.selection.name(),
                        deposit: cell.deposit.name(),
                        theta: cell.theta(),
                        rep,
                        iter,
                        construct_ms: format!("{:.3}", record.construct_ms),
                        update_ms: format!("{:.3}", record.update_ms),
                        best_len: record.best_length,
                        global_loads: record.deposit_ledger.global_loads,
                        atomic_ops: record.deposit_ledger.atomic_ops,
                        schema_version: SCHEMA_VERSION,
                    })
                    .map_err(|e| CliError::io("cannot write CSV", e))?;
                }
                summary.best = Some(summary.best.map_or(best, |b| b.min(best)));
            }
            table.push((problem.name().to_string(), problem.n(), *cell, summary));
        }
    }
    csv.flush().map_err(|e| CliError::io("cannot write CSV", e))?;
    drop(csv);

    let rendered = render_table(&table);
    if args.out.is_some() {
        print!("{rendered}");
    } else {
        eprint!("{rendered}");
    }
    Ok(())
}

fn render_table(rows: &[(String, usize, Cell, Summary)]) -> String {
    let header = [
        "instance",
        "n",
        "selection",
        "deposit",
        "theta",
        "construct_ms",
        "update_ms",
        "best_len",
    ];
    let body: Vec<[String; 8]> = rows
        .iter()
        .map(|(name, n, cell, s)| {
            let per = |total: f64| format!("{:.3}", total / s.iterations.max(1) as f64);
            [
                name.clone(),
                n.to_string(),
                cell.selection.name().to_string(),
                cell.deposit.name().to_string(),
                cell.theta().map_or_else(|| "-".to_string(), |t| t.to_string()),
                per(s.construct_ms),
                per(s.update_ms),
                s.best.map_or_else(|| "-".to_string(), |b| b.to_string()),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(k, (c, w))| if k < 5 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in &body {
        line(row.iter().map(String::as_str).collect());
    }
    out
}
