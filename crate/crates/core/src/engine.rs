//! The Ant System iteration loop.
//!
//! Each iteration constructs one tour per ant, evaporates, deposits, and
//! recomputes the choice table. Construction forks the ants across a fixed
//! worker pool; every ant draws from its own counter-based stream and results
//! are collected in ant order, so a run depends only on its configuration and
//! seed, never on the number of workers.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{construct_tour, ConstructionContext, SelectionStrategy};
use crate::error::{ConfigError, EngineError};
use crate::model::{AntState, ChoiceInfo, NearestNeighborLists, Parameters, PheromoneMatrix, ProblemInstance};
use crate::pheromone::{evaporate, predicted_access_cost, AccessLedger, DepositKernel, DepositStrategy, TourBuffer};
use crate::rng::{RngStream, StreamId, PLACEMENT_STEP};
use crate::tsplib::parse_instance;

/// Where each ant starts its tour.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPlacement {
    /// Ant `k` starts at city `k mod n`.
    #[default]
    Fixed,
    /// Ant `k` starts at a city drawn from its own stream.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub parameters: Parameters,
    pub selection: SelectionStrategy,
    pub deposit: DepositStrategy,
    pub workers: usize,
    pub placement: StartPlacement,
    pub instance_path: PathBuf,
}

impl RunConfig {
    /// Default parameters, full roulette, accumulate deposit, one worker per
    /// available core.
    pub fn new(instance_path: impl Into<PathBuf>) -> Self {
        Self {
            parameters: Parameters::default(),
            selection: SelectionStrategy::RouletteFull,
            deposit: DepositStrategy::Accumulate,
            workers: default_workers(),
            placement: StartPlacement::Fixed,
            instance_path: instance_path.into(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), ConfigError> {
        self.parameters.validate(n, self.selection.uses_nn_lists())?;
        if self.workers == 0 {
            return Err(ConfigError::Workers);
        }
        if self.selection.tile_size() == Some(0) || self.deposit.tile_size() == Some(0) {
            return Err(ConfigError::TileSize);
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

/// Outcome and instrumentation of one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Zero-based iteration index.
    pub iteration: usize,
    /// Shortest tour found in this iteration.
    pub best_length: u64,
    /// Shortest tour found so far, this iteration included.
    pub best_so_far: u64,
    pub mean_length: f64,
    pub construct_ms: f64,
    /// Evaporation plus deposit.
    pub update_ms: f64,
    pub choice_ms: f64,
    pub deposit_ledger: AccessLedger,
    pub evaporation_ledger: AccessLedger,
}

impl IterationRecord {
    fn same_outcome(&self, other: &Self) -> bool {
        self.iteration == other.iteration
            && self.best_length == other.best_length
            && self.best_so_far == other.best_so_far
            && self.mean_length.to_bits() == other.mean_length.to_bits()
            && self.deposit_ledger == other.deposit_ledger
            && self.evaporation_ledger == other.evaporation_ledger
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub n: usize,
    pub ants: usize,
    pub config: RunConfig,
    pub seed: u64,
    pub best_tour: Vec<usize>,
    pub best_length: u64,
    pub per_iteration: Vec<IterationRecord>,
    /// Sum of every iteration's evaporation and deposit ledgers.
    pub total_ledger: AccessLedger,
}

impl RunReport {
    /// Equal apart from timings and the worker count.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let mut a = self.config.clone();
        let mut b = other.config.clone();
        a.workers = 0;
        b.workers = 0;
        self.instance == other.instance
            && self.n == other.n
            && self.ants == other.ants
            && a == b
            && self.seed == other.seed
            && self.best_tour == other.best_tour
            && self.best_length == other.best_length
            && self.total_ledger == other.total_ledger
            && self.per_iteration.len() == other.per_iteration.len()
            && self
                .per_iteration
                .iter()
                .zip(&other.per_iteration)
                .all(|(x, y)| x.same_outcome(y))
    }

    pub fn mean_update_ms(&self) -> f64 {
        mean(self.per_iteration.iter().map(|r| r.update_ms))
    }

    pub fn mean_construct_ms(&self) -> f64 {
        mean(self.per_iteration.iter().map(|r| r.construct_ms))
    }
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let len = values.len();
    if len == 0 {
        return 0.0;
    }
    values.sum::<f64>() / len as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Idle,
    Constructed,
}

pub struct Engine {
    problem: ProblemInstance,
    parameters: Parameters,
    selection: SelectionStrategy,
    deposit: DepositStrategy,
    placement: StartPlacement,
    ants: usize,
    pool: rayon::ThreadPool,
    nn_lists: Option<NearestNeighborLists>,
    tau: PheromoneMatrix,
    choice: ChoiceInfo,
    colony: Vec<AntState>,
    best: Option<(Vec<usize>, u64)>,
    iteration: usize,
    phase: Phase,
}

impl Engine {
    /// Validates `config` against `problem` and sets `tau` to its initial value.
    pub fn new(problem: ProblemInstance, config: &RunConfig) -> Result<Self, EngineError> {
        let n = problem.n();
        config.validate(n)?;
        let parameters = config.parameters.clone();
        let ants = parameters.ant_count(n);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| ConfigError::Pool(e.to_string()))?;
        let nn_lists = if config.selection.uses_nn_lists() {
            Some(NearestNeighborLists::build(&problem, parameters.nn)?)
        } else {
            None
        };
        let tau = PheromoneMatrix::initial(&problem, ants)?;
        let choice = ChoiceInfo::compute(&tau, &problem, parameters.alpha, parameters.beta);
        Ok(Self {
            problem,
            parameters,
            selection: config.selection,
            deposit: config.deposit,
            placement: config.placement,
            ants,
            pool,
            nn_lists,
            tau,
            choice,
            colony: Vec::new(),
            best: None,
            iteration: 0,
            phase: Phase::Idle,
        })
    }

    pub fn problem(&self) -> &ProblemInstance {
        &self.problem
    }

    pub fn tau(&self) -> &PheromoneMatrix {
        &self.tau
    }

    pub fn choice(&self) -> &ChoiceInfo {
        &self.choice
    }

    pub fn ant_count(&self) -> usize {
        self.ants
    }

    /// Ants of the most recent construction phase, in ant order.
    pub fn colony(&self) -> &[AntState] {
        &self.colony
    }

    /// Index of the next iteration to run.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn best(&self) -> Option<(&[usize], u64)> {
        self.best.as_ref().map(|(t, l)| (t.as_slice(), *l))
    }

    fn start_city(&self, ant: usize, stream: &mut RngStream) -> usize {
        let n = self.problem.n();
        match self.placement {
            StartPlacement::Fixed => ant % n,
            StartPlacement::Random => {
                stream.at_step(PLACEMENT_STEP);
                ((stream.next_uniform() * n as f64) as usize).min(n - 1)
            }
        }
    }

    /// Builds this iteration's tours from the current choice table.
    pub fn construct_tours(&mut self) -> Result<&[AntState], EngineError> {
        debug_assert_eq!(self.phase, Phase::Idle, "construction while an update is pending");
        let n = self.problem.n();
        let ctx = ConstructionContext {
            problem: &self.problem,
            choice: &self.choice,
            nn_lists: self.nn_lists.as_ref(),
            strategy: self.selection,
        };
        let iteration = u32::try_from(self.iteration).expect("iteration index fits in u32");
        let seed = self.parameters.seed;
        let this = &*self;
        let colony: Result<Vec<AntState>, _> = self.pool.install(|| {
            (0..this.ants)
                .into_par_iter()
                .map(|k| {
                    let ant = u32::try_from(k).expect("ant index fits in u32");
                    let mut stream = RngStream::new(seed, StreamId::new(iteration, ant, 0));
                    let start = this.start_city(k, &mut stream);
                    construct_tour(&ctx, AntState::new(n, stream), start)
                })
                .collect()
        });
        self.colony = colony?;
        self.phase = Phase::Constructed;
        Ok(&self.colony)
    }

    /// Discards the constructed tours without updating the trails.
    pub fn abandon_round(&mut self) {
        self.phase = Phase::Idle;
    }

    /// Evaporation followed by deposit of the constructed tours.
    fn update(&mut self) -> Result<(AccessLedger, AccessLedger), EngineError> {
        debug_assert_eq!(self.phase, Phase::Constructed, "update without constructed tours");
        let tile_size = self.deposit.tile_size().unwrap_or(1);
        let tours = TourBuffer::from_ants(&self.problem, &self.colony, tile_size)?;
        let rho = self.parameters.rho;
        let deposit = self.deposit;
        let tau = &mut self.tau;
        let (evaporation, ledger) = self.pool.install(|| {
            let evaporation = evaporate(tau, rho);
            deposit.deposit(tau, &tours).map(|l| (evaporation, l))
        })?;
        let predicted = predicted_access_cost(deposit, self.problem.n(), self.ants);
        assert_eq!(
            ledger, predicted,
            "{deposit} recorded a ledger that differs from its predicted cost"
        );
        self.phase = Phase::Idle;
        Ok((evaporation, ledger))
    }

    /// One full iteration: construct, update, recompute choice-info.
    pub fn run_iteration(&mut self) -> Result<IterationRecord, EngineError> {
        let started = Instant::now();
        self.construct_tours()?;
        let construct_ms = elapsed_ms(started);

        let (mut best_ant, mut best_length) = (0, u64::MAX);
        let mut total = 0.0;
        for (k, ant) in self.colony.iter().enumerate() {
            if ant.length < best_length {
                best_ant = k;
                best_length = ant.length;
            }
            total += ant.length as f64;
        }
        let mean_length = total / self.ants as f64;
        if self.best.as_ref().is_none_or(|&(_, l)| best_length < l) {
            self.best = Some((self.colony[best_ant].tour.clone(), best_length));
        }

        let started = Instant::now();
        let (evaporation_ledger, deposit_ledger) = self.update()?;
        let update_ms = elapsed_ms(started);

        let started = Instant::now();
        let (tau, problem) = (&self.tau, &self.problem);
        let (alpha, beta) = (self.parameters.alpha, self.parameters.beta);
        self.choice = self.pool.install(|| ChoiceInfo::compute(tau, problem, alpha, beta));
        let choice_ms = elapsed_ms(started);

        let record = IterationRecord {
            iteration: self.iteration,
            best_length,
            best_so_far: self.best.as_ref().map_or(best_length, |b| b.1),
            mean_length,
            construct_ms,
            update_ms,
            choice_ms,
            deposit_ledger,
            evaporation_ledger,
        };
        self.iteration += 1;
        Ok(record)
    }
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Loads the configured instance and runs it.
pub fn run(config: &RunConfig) -> Result<RunReport, EngineError> {
    let path = &config.instance_path;
    let bytes = std::fs::read(path).map_err(|source| EngineError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let spec = parse_instance(&bytes)?;
    let problem = ProblemInstance::from_spec(&spec)?;
    run_problem(problem, config)
}

/// Runs `config.parameters.iterations` iterations on an in-memory problem.
pub fn run_problem(problem: ProblemInstance, config: &RunConfig) -> Result<RunReport, EngineError> {
    let mut engine = Engine::new(problem, config)?;
    let mut per_iteration = Vec::with_capacity(config.parameters.iterations);
    let mut total_ledger = AccessLedger::default();
    for _ in 0..config.parameters.iterations {
        let record = engine.run_iteration()?;
        total_ledger += record.deposit_ledger + record.evaporation_ledger;
        per_iteration.push(record);
    }
    let (best_tour, best_length) = engine.best.take().expect("at least one iteration ran");
    Ok(RunReport {
        instance: engine.problem.name().to_string(),
        n: engine.problem.n(),
        ants: engine.ants,
        config: config.clone(),
        seed: config.parameters.seed,
        best_tour,
        best_length,
        per_iteration,
        total_ledger,
    })
}
