//! Pheromone evaporation and deposit.
//!
//! Four deposit kernels produce the same trail matrix by different access
//! patterns. Each one reports an [`AccessLedger`] describing the memory traffic
//! the same kernel would issue on a data-parallel device, using the launch
//! geometry documented in [`cost`].

pub mod cost;
mod kernels;

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::DepositError;
use crate::model::{validate_closed_tour, AntState, PheromoneMatrix, ProblemInstance};

pub use cost::{closed_form_global_loads, evaporation_cost, predicted_access_cost};
pub use kernels::{
    deposit_accumulate, deposit_scatter_gather, deposit_scatter_gather_tiled, deposit_symmetric_reduction,
};

/// Abstract memory-traffic counters for one kernel run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AccessLedger {
    pub global_loads: u64,
    pub global_stores: u64,
    pub shared_loads: u64,
    pub atomic_ops: u64,
}

impl Add for AccessLedger {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            global_loads: self.global_loads + rhs.global_loads,
            global_stores: self.global_stores + rhs.global_stores,
            shared_loads: self.shared_loads + rhs.shared_loads,
            atomic_ops: self.atomic_ops + rhs.atomic_ops,
        }
    }
}

impl AddAssign for AccessLedger {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for AccessLedger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DepositStrategy {
    /// One writer per tour edge; concurrent writers to a cell are resolved by
    /// atomics on a device, by an ordered merge here.
    Accumulate,
    /// One thread per cell, each scanning every tour.
    ScatterGather,
    /// Scatter-to-gather with tour tiles staged once per block of cells.
    ScatterGatherTiled { tile_size: usize },
    /// Tiled gather over the upper triangle only, mirrored on write.
    SymmetricReduction { tile_size: usize },
}

impl DepositStrategy {
    pub const ALL_NAMES: [&'static str; 4] = [
        "accumulate",
        "scatter-gather",
        "scatter-gather-tiled",
        "symmetric-reduction",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DepositStrategy::Accumulate => "accumulate",
            DepositStrategy::ScatterGather => "scatter-gather",
            DepositStrategy::ScatterGatherTiled { .. } => "scatter-gather-tiled",
            DepositStrategy::SymmetricReduction { .. } => "symmetric-reduction",
        }
    }

    /// Tile size for tiled variants.
    pub fn tile_size(&self) -> Option<usize> {
        match *self {
            DepositStrategy::ScatterGatherTiled { tile_size } | DepositStrategy::SymmetricReduction { tile_size } => {
                Some(tile_size)
            }
            _ => None,
        }
    }

    /// All four strategies, tiled ones using `tile_size`.
    pub fn all(tile_size: usize) -> [DepositStrategy; 4] {
        [
            DepositStrategy::Accumulate,
            DepositStrategy::ScatterGather,
            DepositStrategy::ScatterGatherTiled { tile_size },
            DepositStrategy::SymmetricReduction { tile_size },
        ]
    }
}

impl fmt::Display for DepositStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tile_size() {
            Some(t) => write!(f, "{}(theta={t})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Something that can deposit a batch of tours onto a trail matrix.
pub trait DepositKernel: Sync {
    fn strategy(&self) -> DepositStrategy;

    fn deposit(&self, tau: &mut PheromoneMatrix, tours: &TourBuffer) -> Result<AccessLedger, DepositError>;
}

impl DepositKernel for DepositStrategy {
    fn strategy(&self) -> DepositStrategy {
        *self
    }

    fn deposit(&self, tau: &mut PheromoneMatrix, tours: &TourBuffer) -> Result<AccessLedger, DepositError> {
        match *self {
            DepositStrategy::Accumulate => deposit_accumulate(tau, tours),
            DepositStrategy::ScatterGather => deposit_scatter_gather(tau, tours),
            DepositStrategy::ScatterGatherTiled { tile_size } => deposit_scatter_gather_tiled(tau, tours, tile_size),
            DepositStrategy::SymmetricReduction { tile_size } => deposit_symmetric_reduction(tau, tours, tile_size),
        }
    }
}

/// `tau <- (1 - rho) tau` on every cell.
pub fn evaporate(tau: &mut PheromoneMatrix, rho: f64) -> AccessLedger {
    assert!(rho > 0.0 && rho <= 1.0, "rho must be in (0,1], got {rho}");
    let keep = 1.0 - rho;
    tau.matrix_mut().as_mut_slice().iter_mut().for_each(|t| *t *= keep);
    evaporation_cost(tau.n())
}

/// Every ant's closed tour, one row per ant, padded with [`TourBuffer::pad`]
/// up to a multiple of the tile size.
#[derive(Debug, Clone, PartialEq)]
pub struct TourBuffer {
    n: usize,
    row_len: usize,
    tile_size: usize,
    cities: Vec<u32>,
    lengths: Vec<u64>,
    deposits: Vec<f64>,
}

impl TourBuffer {
    /// Validates each tour against `problem` and checks its stored length.
    pub fn new<T: AsRef<[usize]>>(
        problem: &ProblemInstance,
        tours: &[T],
        lengths: &[u64],
        tile_size: usize,
    ) -> Result<Self, DepositError> {
        if tile_size == 0 {
            return Err(DepositError::ZeroTileSize);
        }
        if tours.is_empty() {
            return Err(DepositError::NoTours);
        }
        assert_eq!(tours.len(), lengths.len(), "one stored length per tour");
        let n = problem.n();
        for (ant, (tour, &stored)) in tours.iter().zip(lengths).enumerate() {
            let actual = problem
                .tour_length(tour.as_ref())
                .map_err(|source| DepositError::InvalidTour { ant, source })?;
            if actual != stored {
                return Err(DepositError::InconsistentLength { ant, stored, actual });
            }
            if actual == 0 {
                return Err(DepositError::ZeroLength(ant));
            }
        }
        Ok(Self::build(n, tours, lengths, tile_size))
    }

    pub fn from_ants(problem: &ProblemInstance, ants: &[AntState], tile_size: usize) -> Result<Self, DepositError> {
        let tours: Vec<&[usize]> = ants.iter().map(|a| a.tour.as_slice()).collect();
        let lengths: Vec<u64> = ants.iter().map(|a| a.length).collect();
        Self::new(problem, &tours, &lengths, tile_size)
    }

    /// Builds without consulting a problem; tours are only checked for shape.
    /// Lengths are trusted, which lets tests feed deliberately wrong values.
    pub fn from_raw<T: AsRef<[usize]>>(
        n: usize,
        tours: &[T],
        lengths: &[u64],
        tile_size: usize,
    ) -> Result<Self, DepositError> {
        if tile_size == 0 {
            return Err(DepositError::ZeroTileSize);
        }
        if tours.is_empty() {
            return Err(DepositError::NoTours);
        }
        for (ant, tour) in tours.iter().enumerate() {
            validate_closed_tour(n, tour.as_ref()).map_err(|source| DepositError::InvalidTour { ant, source })?;
            if lengths[ant] == 0 {
                return Err(DepositError::ZeroLength(ant));
            }
        }
        Ok(Self::build(n, tours, lengths, tile_size))
    }

    fn build<T: AsRef<[usize]>>(n: usize, tours: &[T], lengths: &[u64], tile_size: usize) -> Self {
        let row_len = (n + 1).div_ceil(tile_size) * tile_size;
        let pad = n as u32;
        let mut cities = Vec::with_capacity(row_len * tours.len());
        for tour in tours {
            cities.extend(tour.as_ref().iter().map(|&c| c as u32));
            cities.resize(cities.len() + row_len - (n + 1), pad);
        }
        Self {
            n,
            row_len,
            tile_size,
            cities,
            lengths: lengths.to_vec(),
            deposits: lengths.iter().map(|&c| 1.0 / c as f64).collect(),
        }
    }

    /// Same tours, padded for a different tile size.
    pub fn repad(&self, tile_size: usize) -> Result<Self, DepositError> {
        let tours: Vec<Vec<usize>> = (0..self.ants())
            .map(|k| self.tour(k).iter().map(|&c| c as usize).collect())
            .collect();
        Self::from_raw(self.n, &tours, &self.lengths, tile_size)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ants(&self) -> usize {
        self.lengths.len()
    }

    pub fn row_len(&self) -> usize {
        self.row_len
    }

    pub fn tile_size(&self) -> usize {
        self.tile_size
    }

    /// Sentinel city index used for padding; never a real city.
    pub fn pad(&self) -> u32 {
        self.n as u32
    }

    /// Padded row of ant `k`.
    #[inline]
    pub fn row(&self, k: usize) -> &[u32] {
        &self.cities[k * self.row_len..(k + 1) * self.row_len]
    }

    /// The `n + 1` real entries of ant `k`'s closed tour.
    #[inline]
    pub fn tour(&self, k: usize) -> &[u32] {
        &self.row(k)[..self.n + 1]
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    /// `1 / C_k` for ant `k`.
    #[inline]
    pub fn deposit(&self, k: usize) -> f64 {
        self.deposits[k]
    }

    /// Total pheromone one round of deposits adds: each of the `n` edges of
    /// every tour lands on two mirrored cells.
    pub fn total_deposit(&self) -> f64 {
        self.deposits.iter().map(|d| 2.0 * self.n as f64 * d).sum()
    }

    fn check_against(&self, tau: &PheromoneMatrix) -> Result<(), DepositError> {
        if tau.n() != self.n {
            return Err(DepositError::DimensionMismatch {
                tau: tau.n(),
                tours: self.n,
            });
        }
        Ok(())
    }
}
