//! Cross-checks deposit kernels against each other on identical input.

use serde::Serialize;

use crate::engine::Engine;
use crate::error::{DepositError, EngineError};
use crate::model::PheromoneMatrix;
use crate::pheromone::{evaporate, predicted_access_cost, AccessLedger, DepositKernel, DepositStrategy, TourBuffer};

/// Default absolute tolerance between two kernels' matrices.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    pub first: DepositStrategy,
    pub second: DepositStrategy,
    pub max_diff: f64,
    /// Cell with the largest difference.
    pub worst_cell: (usize, usize),
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCheck {
    pub strategy: DepositStrategy,
    pub measured: AccessLedger,
    pub predicted: AccessLedger,
    pub symmetric: bool,
}

impl KernelCheck {
    pub fn pass(&self) -> bool {
        self.measured == self.predicted && self.symmetric
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub kernels: Vec<KernelCheck>,
    pub pairs: Vec<PairCheck>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.pairs.iter().all(|p| p.pass) && self.kernels.iter().all(KernelCheck::pass)
    }

    /// The kernel most likely at fault: the one in the most failing pairs (or
    /// failing its own checks), if that is unambiguous.
    pub fn suspect(&self) -> Option<DepositStrategy> {
        let score = |s: DepositStrategy| {
            let pairs = self
                .pairs
                .iter()
                .filter(|p| !p.pass && (p.first == s || p.second == s))
                .count();
            let own = self.kernels.iter().any(|k| k.strategy == s && !k.pass());
            pairs + usize::from(own) * self.kernels.len()
        };
        let mut scored: Vec<(usize, DepositStrategy)> =
            self.kernels.iter().map(|k| (score(k.strategy), k.strategy)).collect();
        scored.sort_by_key(|s| std::cmp::Reverse(s.0));
        match scored.as_slice() {
            [(top, s), rest @ ..] if *top > 0 && rest.first().is_none_or(|r| r.0 < *top) => Some(*s),
            _ => None,
        }
    }
}

/// Runs every kernel on a copy of `tau` with the same tours (repadded for each
/// kernel's tile size) and compares all pairs.
pub fn verify_deposits(
    tau: &PheromoneMatrix,
    tours: &TourBuffer,
    kernels: &[&dyn DepositKernel],
    tolerance: f64,
) -> Result<VerifyReport, DepositError> {
    let mut results = Vec::with_capacity(kernels.len());
    let mut checks = Vec::with_capacity(kernels.len());
    for kernel in kernels {
        let strategy = kernel.strategy();
        let padded = tours.repad(strategy.tile_size().unwrap_or(1))?;
        let mut out = tau.clone();
        let measured = kernel.deposit(&mut out, &padded)?;
        checks.push(KernelCheck {
            strategy,
            measured,
            predicted: predicted_access_cost(strategy, tours.n(), tours.ants()),
            symmetric: out.is_symmetric(),
        });
        results.push(out);
    }
    let mut pairs = Vec::new();
    for a in 0..results.len() {
        for b in a + 1..results.len() {
            let (max_diff, i, j) = results[a].matrix().max_abs_diff(results[b].matrix());
            pairs.push(PairCheck {
                first: checks[a].strategy,
                second: checks[b].strategy,
                max_diff,
                worst_cell: (i, j),
                pass: max_diff <= tolerance,
            });
        }
    }
    Ok(VerifyReport { kernels: checks, pairs })
}

/// Constructs the engine's next set of tours, evaporates a copy of its trail
/// matrix, and verifies `kernels` on that input. The engine's own state is
/// left as it was before the round apart from the constructed colony.
pub fn verify_engine_round(
    engine: &mut Engine,
    rho: f64,
    kernels: &[&dyn DepositKernel],
    tolerance: f64,
) -> Result<VerifyReport, EngineError> {
    let colony = engine.construct_tours()?.to_vec();
    let tours = TourBuffer::from_ants(engine.problem(), &colony, 1)?;
    let mut tau = engine.tau().clone();
    evaporate(&mut tau, rho);
    let report = verify_deposits(&tau, &tours, kernels, tolerance)?;
    engine.abandon_round();
    Ok(report)
}
