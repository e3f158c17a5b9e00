//! Problem matrices, parameters and per-iteration state shared by every strategy.

mod matrix;
mod tabu;

pub use matrix::SquareMatrix;
pub use tabu::{Tabu, VisitedSet};

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, ModelError, TourError};
use crate::rng::RngStream;
use crate::tsplib::InstanceSpec;

/// Heuristic value used for two distinct cities at distance 0 (duplicate
/// coordinates), where `1/d` is undefined: treated as distance 0.1.
pub const COINCIDENT_HEURISTIC: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    name: String,
    dist: SquareMatrix<u32>,
    heuristic: SquareMatrix<f64>,
}

impl ProblemInstance {
    /// Fills the distance matrix from the instance's metric.
    pub fn from_spec(spec: &InstanceSpec) -> Result<Self, ModelError> {
        let n = spec.dimension;
        let mut dist = SquareMatrix::filled(n, 0u32);
        for i in 0..n {
            for j in i + 1..n {
                let d = spec.edge_weight(i, j)?;
                let d = u32::try_from(d).map_err(|_| ModelError::Overflow { i, j, value: d })?;
                dist.set(i, j, d);
                dist.set(j, i, d);
            }
        }
        Self::from_distances(spec.name.clone(), dist)
    }

    pub fn from_distances(name: impl Into<String>, dist: SquareMatrix<u32>) -> Result<Self, ModelError> {
        let n = dist.n();
        if n < 2 {
            return Err(ModelError::TooSmall(n));
        }
        for i in 0..n {
            if dist.get(i, i) != 0 {
                return Err(ModelError::NonZeroDiagonal(i));
            }
            for j in i + 1..n {
                if dist.get(i, j) != dist.get(j, i) {
                    return Err(ModelError::NotSymmetric { i, j });
                }
            }
        }
        let heuristic = SquareMatrix::from_fn(n, |i, j| match dist.get(i, j) {
            _ if i == j => 0.0,
            0 => COINCIDENT_HEURISTIC,
            d => 1.0 / f64::from(d),
        });
        Ok(Self {
            name: name.into(),
            dist,
            heuristic,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.dist.n()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.dist.get(i, j)
    }

    pub fn distances(&self) -> &SquareMatrix<u32> {
        &self.dist
    }

    pub fn heuristic(&self) -> &SquareMatrix<f64> {
        &self.heuristic
    }

    /// Length of a closed tour (`n + 1` entries, last equal to first).
    pub fn tour_length(&self, tour: &[usize]) -> Result<u64, TourError> {
        validate_closed_tour(self.n(), tour)?;
        Ok(tour.windows(2).map(|w| u64::from(self.dist(w[0], w[1]))).sum())
    }

    /// Greedy nearest-neighbour tour from `start`, ties to the lower index.
    pub fn greedy_tour(&self, start: usize) -> Vec<usize> {
        let n = self.n();
        let mut visited = vec![false; n];
        let mut tour = Vec::with_capacity(n + 1);
        let mut current = start;
        visited[current] = true;
        tour.push(current);
        for _ in 1..n {
            let next = (0..n)
                .filter(|&c| !visited[c])
                .min_by_key(|&c| (self.dist(current, c), c))
                .expect("an unvisited city remains");
            visited[next] = true;
            tour.push(next);
            current = next;
        }
        tour.push(start);
        tour
    }
}

/// Checks that `tour` is a closed permutation of `0..n`.
pub fn validate_closed_tour(n: usize, tour: &[usize]) -> Result<(), TourError> {
    if tour.len() != n + 1 {
        return Err(TourError::WrongLength {
            expected: n + 1,
            found: tour.len(),
        });
    }
    let (first, last) = (tour[0], tour[n]);
    if first != last {
        return Err(TourError::NotClosed { first, last });
    }
    let mut seen = vec![false; n];
    for &c in &tour[..n] {
        if c >= n {
            return Err(TourError::NotAPermutation {
                city: c,
                problem: "is out of range",
            });
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(TourError::NotAPermutation {
                city: c,
                problem: "appears twice",
            });
        }
    }
    Ok(())
}

/// Ant System parameters. `ants: None` means one ant per city.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub ants: Option<usize>,
    pub nn: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for Parameters {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 2.0,
            rho: 0.5,
            ants: None,
            nn: 30,
            iterations: 100,
            seed: 0,
        }
    }
}

impl Parameters {
    pub fn ant_count(&self, n: usize) -> usize {
        self.ants.unwrap_or(n)
    }

    /// Validates against an `n`-city problem; `uses_nn` adds the list-length check.
    pub fn validate(&self, n: usize, uses_nn: bool) -> Result<(), ConfigError> {
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(ConfigError::Rho(self.rho));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(ConfigError::Beta(self.beta));
        }
        if self.ants == Some(0) {
            return Err(ConfigError::Ants);
        }
        if self.iterations == 0 {
            return Err(ConfigError::Iterations);
        }
        if uses_nn && !(1..n).contains(&self.nn) {
            return Err(ConfigError::NeighbourListLength { nn: self.nn, n });
        }
        Ok(())
    }

    /// `rho = 1` is legal but erases all trail memory each iteration.
    pub fn is_degenerate(&self) -> bool {
        self.rho == 1.0
    }
}

/// Trail values `tau_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix {
    tau: SquareMatrix<f64>,
}

impl PheromoneMatrix {
    pub fn uniform(n: usize, value: f64) -> Self {
        Self {
            tau: SquareMatrix::filled(n, value),
        }
    }

    pub fn from_matrix(tau: SquareMatrix<f64>) -> Self {
        Self { tau }
    }

    /// `m / C_nn` everywhere, `C_nn` being the greedy tour length from city 0.
    pub fn initial(problem: &ProblemInstance, ants: usize) -> Result<Self, ModelError> {
        let greedy = problem.greedy_tour(0);
        let c_nn = problem.tour_length(&greedy).expect("greedy tour is closed");
        if c_nn == 0 {
            return Err(ModelError::Degenerate);
        }
        Ok(Self::uniform(problem.n(), ants as f64 / c_nn as f64))
    }

    pub fn n(&self) -> usize {
        self.tau.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau.get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.tau.set(i, j, value);
    }

    pub fn matrix(&self) -> &SquareMatrix<f64> {
        &self.tau
    }

    pub fn matrix_mut(&mut self) -> &mut SquareMatrix<f64> {
        &mut self.tau
    }

    pub fn total(&self) -> f64 {
        self.tau.sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.tau.is_symmetric()
    }
}

/// Precomputed `tau^alpha * eta^beta`, zero on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceInfo {
    value: SquareMatrix<f64>,
}

impl ChoiceInfo {
    pub fn compute(tau: &PheromoneMatrix, problem: &ProblemInstance, alpha: f64, beta: f64) -> Self {
        assert_eq!(tau.n(), problem.n(), "pheromone and problem sizes differ");
        let eta = problem.heuristic();
        let value = SquareMatrix::from_fn(problem.n(), |i, j| {
            if i == j {
                0.0
            } else {
                tau.get(i, j).powf(alpha) * eta.get(i, j).powf(beta)
            }
        });
        Self { value }
    }

    /// Wraps an arbitrary weight table, forcing the diagonal to zero.
    pub fn from_matrix(mut value: SquareMatrix<f64>) -> Self {
        for i in 0..value.n() {
            value.set(i, i, 0.0);
        }
        Self { value }
    }

    pub fn n(&self) -> usize {
        self.value.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.value.get(i, j)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        self.value.row(i)
    }

    pub fn matrix(&self) -> &SquareMatrix<f64> {
        &self.value
    }
}

/// The `nn` closest cities of every city, nearest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestNeighborLists {
    nn: usize,
    lists: Vec<usize>,
}

impl NearestNeighborLists {
    pub fn build(problem: &ProblemInstance, nn: usize) -> Result<Self, ModelError> {
        let n = problem.n();
        if !(1..n).contains(&nn) {
            return Err(ModelError::InvalidLength { nn, n });
        }
        let mut lists = Vec::with_capacity(n * nn);
        let mut order: Vec<usize> = Vec::with_capacity(n - 1);
        for i in 0..n {
            order.clear();
            order.extend((0..n).filter(|&j| j != i));
            let key = |&j: &usize| (problem.dist(i, j), j);
            order.select_nth_unstable_by_key(nn - 1, key);
            order.truncate(nn);
            order.sort_unstable_by_key(key);
            lists.extend_from_slice(&order);
        }
        Ok(Self { nn, lists })
    }

    pub fn len(&self) -> usize {
        self.nn
    }

    pub fn is_empty(&self) -> bool {
        self.nn == 0
    }

    pub fn cities(&self) -> usize {
        self.lists.len() / self.nn
    }

    #[inline]
    pub fn neighbours(&self, city: usize) -> &[usize] {
        &self.lists[city * self.nn..(city + 1) * self.nn]
    }
}

/// One ant's in-progress or finished construction.
#[derive(Debug, Clone)]
pub struct AntState {
    pub visited: VisitedSet,
    pub tour: Vec<usize>,
    pub length: u64,
    pub stream: RngStream,
}

impl AntState {
    pub fn new(n: usize, stream: RngStream) -> Self {
        Self {
            visited: VisitedSet::new(n),
            tour: Vec::with_capacity(n + 1),
            length: 0,
            stream,
        }
    }

    pub fn current(&self) -> Option<usize> {
        self.tour.last().copied()
    }
}
