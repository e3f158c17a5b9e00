#![allow(dead_code)]

use std::path::PathBuf;

use antsys::tsplib::{parse_instance, parse_tour};
use antsys::{EdgeWeightType, InstanceSpec, ProblemInstance, TourBuffer};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

pub fn load_spec(file: &str) -> InstanceSpec {
    let bytes = std::fs::read(data_path(file)).unwrap();
    parse_instance(&bytes).unwrap()
}

pub fn load(file: &str) -> ProblemInstance {
    ProblemInstance::from_spec(&load_spec(file)).unwrap()
}

pub fn load_tour(file: &str) -> Vec<usize> {
    parse_tour(&std::fs::read(data_path(file)).unwrap()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` random integer points in a 1000 x 1000 square.
pub fn random_spec(rng: &mut impl Rng, n: usize) -> InstanceSpec {
    InstanceSpec {
        name: format!("rand{n}"),
        dimension: n,
        edge_weight_type: EdgeWeightType::Euc2d,
        coords: (0..n)
            .map(|_| (rng.gen_range(0..1000) as f64, rng.gen_range(0..1000) as f64))
            .collect(),
    }
}

pub fn random_instance(rng: &mut impl Rng, n: usize) -> ProblemInstance {
    ProblemInstance::from_spec(&random_spec(rng, n)).unwrap()
}

/// A random closed tour.
pub fn random_tour(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut tour: Vec<usize> = (0..n).collect();
    tour.shuffle(rng);
    tour.push(tour[0]);
    tour
}

/// `m` random tours of `problem` with their true lengths.
pub fn random_tours(rng: &mut impl Rng, problem: &ProblemInstance, m: usize, tile_size: usize) -> TourBuffer {
    let n = problem.n();
    let tours: Vec<Vec<usize>> = (0..m).map(|_| random_tour(rng, n)).collect();
    let lengths: Vec<u64> = tours.iter().map(|t| problem.tour_length(t).unwrap()).collect();
    TourBuffer::new(problem, &tours, &lengths, tile_size).unwrap()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = values.len() / 2;
    if values.len().is_multiple_of(2) {
        (values[mid - 1] + values[mid]) / 2.0
    } else {
        values[mid]
    }
}
