//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use antsys::tsplib::parse_instance;
use antsys::{Engine, PheromoneMatrix, ProblemInstance, RunConfig, SelectionStrategy, TourBuffer};

/// Loads an instance from the workspace `data/` directory.
pub fn instance(file: &str) -> ProblemInstance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file);
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    ProblemInstance::from_spec(&parse_instance(&bytes).expect("valid instance")).expect("valid distances")
}

/// An engine at iteration 0 with default parameters.
pub fn engine(problem: &ProblemInstance, selection: SelectionStrategy, workers: usize) -> Engine {
    let mut config = RunConfig::new(problem.name());
    config.selection = selection;
    config.workers = workers;
    config.parameters.seed = 1;
    Engine::new(problem.clone(), &config).expect("valid configuration")
}

/// One iteration's tours and the initial trail matrix, ready for a deposit.
pub fn deposit_input(problem: &ProblemInstance, tile_size: usize) -> (PheromoneMatrix, TourBuffer) {
    let mut engine = engine(problem, SelectionStrategy::RouletteFull, 1);
    let colony = engine.construct_tours().expect("construction succeeds").to_vec();
    let tours = TourBuffer::from_ants(problem, &colony, tile_size).expect("valid tours");
    (engine.tau().clone(), tours)
}
