//! Ant System for the symmetric travelling salesman problem.
//!
//! The crate is organised around the two phases of an Ant System iteration:
//!
//! * [`construction`]: every ant builds a closed tour city by city, using one of
//!   three interchangeable next-city selection schemes (full roulette, roulette
//!   restricted to a nearest-neighbour list, and a data-parallel tiled
//!   multiply-and-reduce selection).
//! * [`pheromone`]: evaporation followed by one of four deposit kernels
//!   (per-edge accumulation, scatter-to-gather, tiled scatter-to-gather and a
//!   symmetric half-matrix reduction). Each kernel keeps an [`AccessLedger`]
//!   of abstract memory traffic that can be checked against closed-form counts.
//!
//! [`engine`] ties the phases together into a deterministic, parallel solver,
//! [`tsplib`] reads the benchmark instances and [`verify`] cross-checks the
//! deposit kernels against each other.

pub mod construction;
pub mod engine;
pub mod error;
pub mod model;
pub mod pheromone;
pub mod rng;
pub mod tsplib;
pub mod verify;

pub use construction::{construct_tour, SelectionStrategy};
pub use engine::{Engine, IterationRecord, RunConfig, RunReport, StartPlacement};
pub use error::{ConfigError, DepositError, EngineError, ModelError, SelectionError, TourError, TsplibError};
pub use model::{
    AntState, ChoiceInfo, NearestNeighborLists, Parameters, PheromoneMatrix, ProblemInstance, SquareMatrix, Tabu,
    VisitedSet,
};
pub use pheromone::{predicted_access_cost, AccessLedger, DepositKernel, DepositStrategy, TourBuffer};
pub use rng::{RngStream, StreamId};
pub use tsplib::{EdgeWeightType, InstanceSpec};
