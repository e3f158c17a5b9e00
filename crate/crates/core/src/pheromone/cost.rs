//! Predicted access counts for the deposit kernels.
//!
//! A kernel is modelled as a launch of `T` threads in blocks of `theta`:
//!
//! - `Accumulate`: one thread per tour edge; 2 tour loads and 2 atomic adds
//!   per edge, `2mn` of each.
//! - `ScatterGather`: `T = n^2`, one thread per cell, each reading both
//!   endpoints of every tour edge: `2mn` loads per thread, `2mn * n^2` total.
//! - `ScatterGatherTiled`: `T = n^2`; each block stages the `mn` real edges
//!   once (pad slots are filled with the sentinel, not loaded), so
//!   `2mn * ceil(n^2 / theta)` global loads. Every thread reads the `theta - 1`
//!   slots staged by other lanes from shared memory, two values each.
//! - `SymmetricReduction`: `T = ceil(n^2 / 2)`; the first `n(n-1)/2` threads own
//!   one pair `i < j` and store both mirrored cells, the rest only stage.
//!
//! With `m = n` and `theta` dividing the thread count these reduce to
//! `2n^4`, `2n^4 / theta` and `n^4 / theta` global loads.

use super::{AccessLedger, DepositStrategy};

/// Ledger of one evaporation pass: every cell read and written once.
pub fn evaporation_cost(n: usize) -> AccessLedger {
    let cells = (n * n) as u64;
    AccessLedger {
        global_loads: cells,
        global_stores: cells,
        ..AccessLedger::default()
    }
}

/// Counts a deposit of `m` tours over `n` cities is expected to record.
pub fn predicted_access_cost(strategy: DepositStrategy, n: usize, m: usize) -> AccessLedger {
    let (n64, m64) = (n as u64, m as u64);
    let cells = n64 * n64;
    let per_scan = 2 * m64 * n64;
    let pairs = n64 * n64.saturating_sub(1) / 2;
    match strategy {
        DepositStrategy::Accumulate => AccessLedger {
            global_loads: per_scan,
            atomic_ops: per_scan,
            ..AccessLedger::default()
        },
        DepositStrategy::ScatterGather => AccessLedger {
            global_loads: cells * per_scan,
            global_stores: cells,
            ..AccessLedger::default()
        },
        DepositStrategy::ScatterGatherTiled { tile_size } => {
            let theta = tile_size as u64;
            AccessLedger {
                global_loads: cells.div_ceil(theta) * per_scan,
                global_stores: cells,
                shared_loads: cells * shared_per_thread(n64, m64, theta),
                atomic_ops: 0,
            }
        }
        DepositStrategy::SymmetricReduction { tile_size } => {
            let theta = tile_size as u64;
            let threads = cells.div_ceil(2);
            AccessLedger {
                global_loads: threads.div_ceil(theta) * per_scan,
                global_stores: 2 * pairs,
                shared_loads: pairs * shared_per_thread(n64, m64, theta),
                atomic_ops: 0,
            }
        }
    }
}

fn shared_per_thread(n: u64, m: u64, theta: u64) -> u64 {
    2 * m * n.div_ceil(theta) * (theta - 1)
}

/// The closed-form global load counts `2n^4`, `2n^4 / theta` and `n^4 / theta`
/// for the gather kernels, as real numbers. `None` for `Accumulate`.
pub fn closed_form_global_loads(strategy: DepositStrategy, n: usize) -> Option<f64> {
    let n4 = (n as f64).powi(4);
    match strategy {
        DepositStrategy::Accumulate => None,
        DepositStrategy::ScatterGather => Some(2.0 * n4),
        DepositStrategy::ScatterGatherTiled { tile_size } => Some(2.0 * n4 / tile_size as f64),
        DepositStrategy::SymmetricReduction { tile_size } => Some(n4 / tile_size as f64),
    }
}
