//! Tour construction: next-city selection schemes and the per-ant tour loop.
//!
//! All schemes read the shared [`ChoiceInfo`] table. Each construction step
//! repositions the ant's [`RngStream`] at that step, so the draws a step sees
//! depend only on `(seed, iteration, ant, step)`.

use serde::{Deserialize, Serialize};

use crate::error::{SelectionError, TourError};
use crate::model::{AntState, ChoiceInfo, NearestNeighborLists, ProblemInstance, Tabu};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SelectionStrategy {
    /// Random proportional rule over every unvisited city.
    RouletteFull,
    /// Random proportional rule over the unvisited part of the nearest-neighbour
    /// list, falling back to the best unvisited city once the list is exhausted.
    RouletteNn,
    /// Multiply-and-reduce: each city's weight times its own uniform draw, the
    /// maximum taken tile by tile and then across tile winners.
    DataParallelTiled { tile_size: usize },
}

impl SelectionStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionStrategy::RouletteFull => "roulette",
            SelectionStrategy::RouletteNn => "nn",
            SelectionStrategy::DataParallelTiled { .. } => "data-parallel",
        }
    }

    pub fn tile_size(&self) -> Option<usize> {
        match *self {
            SelectionStrategy::DataParallelTiled { tile_size } => Some(tile_size),
            _ => None,
        }
    }

    pub fn uses_nn_lists(&self) -> bool {
        matches!(self, SelectionStrategy::RouletteNn)
    }
}

fn check_current(choice: &ChoiceInfo, current: usize) -> Result<(), SelectionError> {
    if current >= choice.n() {
        Err(SelectionError::CityOutOfRange(current))
    } else {
        Ok(())
    }
}

/// Prefix-sum walk over `candidates` in the order given. `None` when the total
/// weight is zero (or not a usable number).
fn roulette_walk<F, I>(weights: &[f64], candidates: F, u: f64) -> Option<usize>
where
    F: Fn() -> I,
    I: Iterator<Item = usize>,
{
    let total: f64 = candidates().map(|c| weights[c]).sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    let target = u * total;
    let mut cumulative = 0.0;
    let mut last_positive = None;
    for c in candidates() {
        let w = weights[c];
        if w > 0.0 {
            cumulative += w;
            last_positive = Some(c);
            if target < cumulative {
                return Some(c);
            }
        }
    }
    // Rounding can leave `target` a hair above the running sum.
    last_positive
}

/// Random proportional rule: one draw, prefix-sum walk in ascending city order.
///
/// If every unvisited city has weight zero the lowest-index unvisited city is
/// returned instead.
pub fn select_next_roulette<T: Tabu + ?Sized>(
    choice: &ChoiceInfo,
    current: usize,
    tabu: &T,
    stream: &mut RngStream,
) -> Result<usize, SelectionError> {
    check_current(choice, current)?;
    let first_free = tabu.unvisited().next().ok_or(SelectionError::AllVisited)?;
    let u = stream.next_uniform();
    Ok(roulette_walk(choice.row(current), || tabu.unvisited(), u).unwrap_or(first_free))
}

/// Highest weight among unvisited cities, ties to the lower index.
fn best_unvisited<T: Tabu + ?Sized>(weights: &[f64], tabu: &T) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for c in tabu.unvisited() {
        if best.is_none_or(|(_, w)| weights[c] > w) {
            best = Some((c, weights[c]));
        }
    }
    best.map(|(c, _)| c)
}

/// Roulette restricted to the unvisited members of `current`'s neighbour list,
/// walked nearest first. When the whole list is visited: argmax of the
/// choice-info row over all unvisited cities.
pub fn select_next_nn<T: Tabu + ?Sized>(
    choice: &ChoiceInfo,
    nn_lists: &NearestNeighborLists,
    current: usize,
    tabu: &T,
    stream: &mut RngStream,
) -> Result<usize, SelectionError> {
    check_current(choice, current)?;
    if tabu.unvisited().next().is_none() {
        return Err(SelectionError::AllVisited);
    }
    let weights = choice.row(current);
    let candidates = || {
        nn_lists
            .neighbours(current)
            .iter()
            .copied()
            .filter(|&c| !tabu.is_visited(c))
    };
    if candidates().next().is_some() {
        let u = stream.next_uniform();
        if let Some(c) = roulette_walk(weights, candidates, u) {
            return Ok(c);
        }
    }
    Ok(best_unvisited(weights, tabu).expect("an unvisited city exists"))
}

/// Multiply-and-reduce selection.
///
/// Draws one uniform per city in ascending city order (visited cities included),
/// scores `weight * u * available`, keeps the best city of each tile of
/// `tile_size` consecutive cities and returns the best tile winner. Ties go to
/// the lower index at both levels, so the result does not depend on
/// `tile_size`. All-zero scores fall back to the lowest-index unvisited city.
pub fn select_next_data_parallel<T: Tabu + ?Sized>(
    choice: &ChoiceInfo,
    current: usize,
    tabu: &T,
    stream: &mut RngStream,
    tile_size: usize,
) -> Result<usize, SelectionError> {
    check_current(choice, current)?;
    if tile_size == 0 {
        return Err(SelectionError::ZeroTileSize);
    }
    let first_free = tabu.unvisited().next().ok_or(SelectionError::AllVisited)?;
    let weights = choice.row(current);
    let n = weights.len();

    let mut best = (0.0_f64, usize::MAX);
    for tile_start in (0..n).step_by(tile_size) {
        let tile_end = (tile_start + tile_size).min(n);
        let mut tile_best = (0.0_f64, usize::MAX);
        for (city, &w) in weights.iter().enumerate().take(tile_end).skip(tile_start) {
            let u = stream.next_uniform();
            let available = if tabu.is_visited(city) { 0.0 } else { 1.0 };
            let score = w * u * available;
            if score > tile_best.0 {
                tile_best = (score, city);
            }
        }
        if tile_best.0 > best.0 {
            best = tile_best;
        }
    }
    Ok(if best.1 == usize::MAX { first_free } else { best.1 })
}

/// Everything a construction step needs besides the ant itself.
#[derive(Debug, Clone, Copy)]
pub struct ConstructionContext<'a> {
    pub problem: &'a ProblemInstance,
    pub choice: &'a ChoiceInfo,
    pub nn_lists: Option<&'a NearestNeighborLists>,
    pub strategy: SelectionStrategy,
}

impl ConstructionContext<'_> {
    pub fn select_next<T: Tabu + ?Sized>(
        &self,
        current: usize,
        tabu: &T,
        stream: &mut RngStream,
    ) -> Result<usize, SelectionError> {
        match self.strategy {
            SelectionStrategy::RouletteFull => select_next_roulette(self.choice, current, tabu, stream),
            SelectionStrategy::RouletteNn => {
                let lists = self.nn_lists.expect("RouletteNn needs nearest-neighbour lists");
                select_next_nn(self.choice, lists, current, tabu, stream)
            }
            SelectionStrategy::DataParallelTiled { tile_size } => {
                select_next_data_parallel(self.choice, current, tabu, stream, tile_size)
            }
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Tour(#[from] TourError),
}

/// Builds a closed tour from `start`. Step `s` (1-based, one per added city)
/// uses stream position `s`.
pub fn construct_tour(
    ctx: &ConstructionContext<'_>,
    mut ant: AntState,
    start: usize,
) -> Result<AntState, ConstructError> {
    let n = ctx.problem.n();
    if start >= n {
        return Err(SelectionError::CityOutOfRange(start).into());
    }
    ant.tour.clear();
    ant.tour.push(start);
    ant.visited.insert(start);
    let mut current = start;
    for step in 1..n {
        ant.stream.at_step(step as u32);
        let next = ctx.select_next(current, &ant.visited, &mut ant.stream)?;
        debug_assert!(!ant.visited.is_visited(next));
        ant.visited.insert(next);
        ant.tour.push(next);
        current = next;
    }
    ant.tour.push(start);
    ant.length = ctx.problem.tour_length(&ant.tour)?;
    Ok(ant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SquareMatrix, VisitedSet};
    use crate::rng::StreamId;

    fn stream(ant: u32) -> RngStream {
        RngStream::new(7, StreamId::new(0, ant, 1))
    }

    fn weights(n: usize, row0: &[(usize, f64)]) -> ChoiceInfo {
        let mut m = SquareMatrix::filled(n, 1.0);
        for &(j, w) in row0 {
            m.set(0, j, w);
        }
        ChoiceInfo::from_matrix(m)
    }

    #[test]
    fn forced_move_with_one_city_left() {
        let choice = weights(4, &[]);
        let tabu = vec![true, true, false, true];
        for ant in 0..20 {
            let mut s = stream(ant);
            assert_eq!(select_next_roulette(&choice, 0, &tabu, &mut s).unwrap(), 2);
            assert_eq!(select_next_data_parallel(&choice, 0, &tabu, &mut s, 3).unwrap(), 2);
        }
    }

    #[test]
    fn all_visited_is_an_error() {
        let choice = weights(3, &[]);
        let tabu = vec![true; 3];
        let mut s = stream(0);
        assert_eq!(
            select_next_roulette(&choice, 0, &tabu, &mut s),
            Err(SelectionError::AllVisited)
        );
        assert_eq!(
            select_next_data_parallel(&choice, 0, &tabu, &mut s, 2),
            Err(SelectionError::AllVisited)
        );
    }

    #[test]
    fn zero_weight_falls_back_to_lowest_index() {
        let choice = weights(5, &[(1, 0.0), (2, 0.0), (3, 0.0), (4, 0.0)]);
        let tabu = vec![true, true, false, false, false];
        let mut s = stream(0);
        assert_eq!(select_next_roulette(&choice, 0, &tabu, &mut s).unwrap(), 2);
        assert_eq!(select_next_data_parallel(&choice, 0, &tabu, &mut s, 2).unwrap(), 2);
    }

    #[test]
    fn nn_fallback_is_argmax_with_index_ties() {
        // 10 cities; from city 0 the list is [1, 2, 3], all visited.
        let n = 10;
        let mut d = SquareMatrix::filled(n, 50u32);
        for i in 0..n {
            d.set(i, i, 0);
        }
        for (j, dist) in [(1, 1), (2, 2), (3, 3)] {
            d.set(0, j, dist);
            d.set(j, 0, dist);
        }
        let problem = ProblemInstance::from_distances("nn", d).unwrap();
        let lists = NearestNeighborLists::build(&problem, 3).unwrap();
        assert_eq!(lists.neighbours(0), &[1, 2, 3]);
        let choice = weights(n, &[(5, 0.3), (9, 0.3), (7, 0.1), (4, 0.0), (6, 0.0), (8, 0.0)]);
        let mut tabu = vec![false; n];
        for c in [0, 1, 2, 3, 4, 6, 8] {
            tabu[c] = true;
        }
        let mut s = stream(0);
        assert_eq!(select_next_nn(&choice, &lists, 0, &tabu, &mut s).unwrap(), 5);
        // Exactly one list member free: always that one.
        tabu[2] = false;
        for ant in 0..50 {
            let mut s = stream(ant);
            assert_eq!(select_next_nn(&choice, &lists, 0, &tabu, &mut s).unwrap(), 2);
        }
    }

    #[test]
    fn data_parallel_rejects_zero_tile() {
        let choice = weights(3, &[]);
        let tabu = VisitedSet::new(3);
        let mut s = stream(0);
        assert_eq!(
            select_next_data_parallel(&choice, 0, &tabu, &mut s, 0),
            Err(SelectionError::ZeroTileSize)
        );
    }

    #[test]
    fn data_parallel_consumes_one_draw_per_city() {
        let choice = weights(13, &[]);
        let mut tabu = VisitedSet::new(13);
        tabu.insert(0);
        tabu.insert(5);
        let mut s = stream(0);
        select_next_data_parallel(&choice, 0, &tabu, &mut s, 4).unwrap();
        assert_eq!(s.draw_index(), 13);
    }

    #[test]
    fn two_city_tour() {
        let d = SquareMatrix::from_vec(2, vec![0, 7, 7, 0]).unwrap();
        let problem = ProblemInstance::from_distances("two", d).unwrap();
        let choice = weights(2, &[]);
        let lists = NearestNeighborLists::build(&problem, 1).unwrap();
        for strategy in [
            SelectionStrategy::RouletteFull,
            SelectionStrategy::RouletteNn,
            SelectionStrategy::DataParallelTiled { tile_size: 1 },
        ] {
            let ctx = ConstructionContext {
                problem: &problem,
                choice: &choice,
                nn_lists: Some(&lists),
                strategy,
            };
            for start in 0..2 {
                let ant = construct_tour(&ctx, AntState::new(2, stream(0)), start).unwrap();
                assert_eq!(ant.tour, vec![start, 1 - start, start]);
                assert_eq!(ant.length, 14);
                assert!(ant.visited.is_full());
            }
        }
    }
}
