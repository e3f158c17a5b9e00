use rayon::prelude::*;

use super::{AccessLedger, TourBuffer};
use crate::error::DepositError;
use crate::model::PheromoneMatrix;

/// Ants handled by one accumulate work item. Fixed so that the merge order is
/// the same for any worker count.
const ANT_CHUNK: usize = 8;

/// Staged key of a pad slot; matches no cell.
const PAD_KEY: u64 = u64::MAX;
/// Key of a diagonal cell; no tour edge is a self-loop.
const DIAGONAL_KEY: u64 = u64::MAX - 1;

#[inline]
fn edge_key(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (u64::from(lo) << 32) | u64::from(hi)
}

#[inline]
fn cell_key(i: usize, j: usize) -> u64 {
    if i == j {
        DIAGONAL_KEY
    } else {
        edge_key(i as u32, j as u32)
    }
}

fn check_tile(tours: &TourBuffer, tile_size: usize) -> Result<(), DepositError> {
    if tile_size == 0 {
        return Err(DepositError::ZeroTileSize);
    }
    if !tours.row_len().is_multiple_of(tile_size) {
        return Err(DepositError::PaddingMismatch {
            row_len: tours.row_len(),
            tile_size,
        });
    }
    Ok(())
}

/// Edge-parallel deposit: every tour edge `(i, j)` adds `1/C_k` to `tau[i][j]`
/// and `tau[j][i]`.
///
/// Ant chunks produce their `(cell, delta)` lists in parallel; the lists are
/// applied in ant-major, edge-minor order, which is exactly the sequential
/// reference order. The ledger records what the atomic device kernel issues:
/// two tour loads and two atomic adds per edge.
pub fn deposit_accumulate(tau: &mut PheromoneMatrix, tours: &TourBuffer) -> Result<AccessLedger, DepositError> {
    tours.check_against(tau)?;
    let n = tours.n();
    let chunks: Vec<(Vec<(usize, f64)>, AccessLedger)> = (0..tours.ants().div_ceil(ANT_CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let ants = chunk * ANT_CHUNK..((chunk + 1) * ANT_CHUNK).min(tours.ants());
            let mut writes = Vec::with_capacity(ants.len() * 2 * n);
            let mut ledger = AccessLedger::default();
            for k in ants {
                let delta = tours.deposit(k);
                for edge in tours.tour(k).windows(2) {
                    let (a, b) = (edge[0] as usize, edge[1] as usize);
                    writes.push((a * n + b, delta));
                    writes.push((b * n + a, delta));
                    ledger.global_loads += 2;
                    ledger.atomic_ops += 2;
                }
            }
            (writes, ledger)
        })
        .collect();

    let cells = tau.matrix_mut().as_mut_slice();
    let mut ledger = AccessLedger::default();
    for (writes, part) in chunks {
        for (cell, delta) in writes {
            cells[cell] += delta;
        }
        ledger += part;
    }
    Ok(ledger)
}

/// Cell-parallel deposit: each cell scans every ant's tour for its edge, two
/// global loads (entry and successor) per inspected edge.
pub fn deposit_scatter_gather(tau: &mut PheromoneMatrix, tours: &TourBuffer) -> Result<AccessLedger, DepositError> {
    tours.check_against(tau)?;
    let n = tours.n();
    let ledger = tau
        .matrix_mut()
        .as_mut_slice()
        .par_chunks_mut(n)
        .enumerate()
        .map(|(i, row)| {
            let mut ledger = AccessLedger::default();
            let (ci, n32) = (i as u32, n as u32);
            for (j, cell) in row.iter_mut().enumerate() {
                let cj = j as u32;
                let mut acc = *cell;
                for k in 0..tours.ants() {
                    let tour = tours.tour(k);
                    let delta = tours.deposit(k);
                    for p in 0..n {
                        let (a, b) = (tour[p], tour[p + 1]);
                        if (a == ci && b == cj) || (a == cj && b == ci) {
                            acc += delta;
                        }
                    }
                    ledger.global_loads += 2 * n as u64;
                }
                debug_assert!(cj < n32);
                *cell = acc;
                ledger.global_stores += 1;
            }
            ledger
        })
        .sum();
    Ok(ledger)
}

/// Shared state of the two tiled kernels: stages each tour tile once for a
/// block of `tile_size` threads, then lets every active thread of the block
/// match its cell key against the staged slots.
struct TileStager<'a> {
    tours: &'a TourBuffer,
    tile_size: usize,
    tiles_per_ant: usize,
    staged: Vec<u64>,
}

impl<'a> TileStager<'a> {
    fn new(tours: &'a TourBuffer, tile_size: usize) -> Self {
        Self {
            tours,
            tile_size,
            tiles_per_ant: tours.n().div_ceil(tile_size),
            staged: vec![PAD_KEY; tile_size],
        }
    }

    /// Runs one block. `acc[l]` is updated in place for each active thread `l`
    /// (`keys[l]` is its cell). Summation per cell is ant-major, position-minor.
    fn run_block(&mut self, keys: &[u64], acc: &mut [f64], ledger: &mut AccessLedger) {
        let n = self.tours.n();
        let theta = self.tile_size;
        for k in 0..self.tours.ants() {
            let row = self.tours.row(k);
            let delta = self.tours.deposit(k);
            for t in 0..self.tiles_per_ant {
                // Cooperative load: lane s stages edge slot t*theta + s.
                for (s, slot) in self.staged.iter_mut().enumerate() {
                    let p = t * theta + s;
                    *slot = if p < n {
                        ledger.global_loads += 2;
                        edge_key(row[p], row[p + 1])
                    } else {
                        PAD_KEY
                    };
                }
                for (key, a) in keys.iter().zip(acc.iter_mut()) {
                    for &slot in &self.staged {
                        if slot == *key {
                            *a += delta;
                        }
                    }
                }
                // Each active thread reads the theta - 1 slots staged by other lanes.
                ledger.shared_loads += 2 * (theta as u64 - 1) * keys.len() as u64;
            }
        }
    }
}

/// Scatter-to-gather with tiling: blocks of `tile_size` consecutive cells
/// (row-major) share the global loads of each staged tour tile.
pub fn deposit_scatter_gather_tiled(
    tau: &mut PheromoneMatrix,
    tours: &TourBuffer,
    tile_size: usize,
) -> Result<AccessLedger, DepositError> {
    tours.check_against(tau)?;
    check_tile(tours, tile_size)?;
    let n = tours.n();
    let ledger = tau
        .matrix_mut()
        .as_mut_slice()
        .par_chunks_mut(tile_size)
        .enumerate()
        .map_init(
            || TileStager::new(tours, tile_size),
            |stager, (block, cells)| {
                let first = block * tile_size;
                let keys: Vec<u64> = (first..first + cells.len()).map(|c| cell_key(c / n, c % n)).collect();
                let mut ledger = AccessLedger::default();
                stager.run_block(&keys, cells, &mut ledger);
                ledger.global_stores += cells.len() as u64;
                ledger
            },
        )
        .sum();
    Ok(ledger)
}

/// Upper-triangle pairs `(i, j)`, `i < j`, in row-major order.
fn upper_pairs(n: usize) -> Vec<(u32, u32)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Tiled gather over half the matrix. The launch has `ceil(n^2 / 2)` threads;
/// the first `n(n-1)/2` own one upper-triangle pair each and write both
/// mirrored cells, the rest only help stage tiles.
pub fn deposit_symmetric_reduction(
    tau: &mut PheromoneMatrix,
    tours: &TourBuffer,
    tile_size: usize,
) -> Result<AccessLedger, DepositError> {
    tours.check_against(tau)?;
    check_tile(tours, tile_size)?;
    let n = tours.n();
    let pairs = upper_pairs(n);
    let threads = (n * n).div_ceil(2);
    let blocks = threads.div_ceil(tile_size);

    let results: Vec<(Vec<f64>, AccessLedger)> = {
        let tau_ref = &*tau;
        (0..blocks)
            .into_par_iter()
            .map_init(
                || TileStager::new(tours, tile_size),
                |stager, block| {
                    let first = block * tile_size;
                    let active = pairs.len().min(first + tile_size).saturating_sub(first);
                    let own = &pairs[first.min(pairs.len())..first.min(pairs.len()) + active];
                    let keys: Vec<u64> = own.iter().map(|&(i, j)| edge_key(i, j)).collect();
                    let mut acc: Vec<f64> = own.iter().map(|&(i, j)| tau_ref.get(i as usize, j as usize)).collect();
                    let mut ledger = AccessLedger::default();
                    stager.run_block(&keys, &mut acc, &mut ledger);
                    ledger.global_stores += 2 * active as u64;
                    (acc, ledger)
                },
            )
            .collect()
    };

    let mut ledger = AccessLedger::default();
    let mut pair_iter = pairs.iter();
    for (values, part) in results {
        for (value, &(i, j)) in values.into_iter().zip(pair_iter.by_ref()) {
            tau.set(i as usize, j as usize, value);
            tau.set(j as usize, i as usize, value);
        }
        ledger += part;
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn buffer(n: usize, tours: &[Vec<usize>], lengths: &[u64], theta: usize) -> TourBuffer {
        TourBuffer::from_raw(n, tours, lengths, theta).unwrap()
    }

    #[test]
    fn single_ant_triangle() {
        let tours = buffer(3, &[vec![0, 1, 2, 0]], &[18], 1);
        let mut tau = PheromoneMatrix::uniform(3, 0.0);
        deposit_accumulate(&mut tau, &tours).unwrap();
        let d = 1.0 / 18.0;
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(tau.get(i, j), d);
            assert_eq!(tau.get(j, i), d);
        }
        assert_eq!(tau.get(0, 0), 0.0);
    }

    #[test]
    fn identical_tours_double_up() {
        let tour = vec![0, 2, 1, 3, 0];
        let tours = buffer(4, &[tour.clone(), tour], &[20, 20], 1);
        let mut tau = PheromoneMatrix::uniform(4, 0.0);
        deposit_accumulate(&mut tau, &tours).unwrap();
        assert_eq!(tau.get(0, 2), 2.0 * (1.0 / 20.0));
        assert_eq!(tau.get(1, 3), 2.0 * (1.0 / 20.0));
        // (0, 1) is not on the tour.
        assert_eq!(tau.get(0, 1), 0.0);
    }

    #[test]
    fn kernels_agree_on_single_deposit_cells() {
        // 5 cities, 3 ants; every cell is hit at most once.
        let tours = vec![vec![0, 1, 2, 3, 4, 0], vec![0, 2, 4, 1, 3, 0], vec![0, 3, 1, 4, 2, 0]];
        let lengths = [11, 13, 17];
        let start = PheromoneMatrix::uniform(5, 0.25);
        let reference = {
            let mut t = start.clone();
            deposit_accumulate(&mut t, &buffer(5, &tours, &lengths, 1)).unwrap();
            t
        };
        for theta in [1, 2, 3, 4, 7] {
            let buf = buffer(5, &tours, &lengths, theta);
            let mut sg = start.clone();
            deposit_scatter_gather(&mut sg, &buf).unwrap();
            let mut tiled = start.clone();
            deposit_scatter_gather_tiled(&mut tiled, &buf, theta).unwrap();
            let mut sym = start.clone();
            deposit_symmetric_reduction(&mut sym, &buf, theta).unwrap();
            assert_eq!(sg, reference);
            assert_eq!(tiled, reference);
            assert_eq!(sym, reference);
        }
    }

    #[test]
    fn tiled_requires_matching_padding() {
        let buf = buffer(5, &[vec![0, 1, 2, 3, 4, 0]], &[5], 4);
        let mut tau = PheromoneMatrix::uniform(5, 1.0);
        assert_eq!(
            deposit_scatter_gather_tiled(&mut tau, &buf, 3),
            Err(DepositError::PaddingMismatch {
                row_len: 8,
                tile_size: 3
            })
        );
        assert_eq!(
            deposit_symmetric_reduction(&mut tau, &buf, 0),
            Err(DepositError::ZeroTileSize)
        );
        // 2 divides the row length 8 as well.
        assert!(deposit_scatter_gather_tiled(&mut tau, &buf, 2).is_ok());
    }

    #[test]
    fn dimension_mismatch() {
        let buf = buffer(3, &[vec![0, 1, 2, 0]], &[3], 1);
        let mut tau = PheromoneMatrix::uniform(4, 1.0);
        assert!(matches!(
            deposit_scatter_gather(&mut tau, &buf),
            Err(DepositError::DimensionMismatch { tau: 4, tours: 3 })
        ));
    }
}
