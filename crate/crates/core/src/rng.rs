//! Counter-based random streams.
//!
//! Every draw is a pure function of `(key, iteration, ant, step, draw index)`,
//! so the numbers an ant sees never depend on which worker runs it or in what
//! order. The generator is ChaCha8: `(iteration, ant)` selects the 64-bit
//! ChaCha stream and `(step, draw)` selects the word position inside it.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

/// Bits of the ChaCha word position reserved for draws within one step.
const DRAW_BITS: u32 = 40;
/// Highest usable step index (word positions are 68 bits wide).
pub const MAX_STEP: u32 = (1 << (68 - DRAW_BITS)) - 1;
/// Step index reserved for placing an ant on a random start city.
pub const PLACEMENT_STEP: u32 = MAX_STEP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId {
    pub iteration: u32,
    pub ant: u32,
    pub step: u32,
}

impl StreamId {
    pub fn new(iteration: u32, ant: u32, step: u32) -> Self {
        Self { iteration, ant, step }
    }

    fn chacha_stream(self) -> u64 {
        (u64::from(self.iteration) << 32) | u64::from(self.ant)
    }
}

#[derive(Debug, Clone)]
pub struct RngStream {
    key: u64,
    id: StreamId,
    draw: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(key: u64, id: StreamId) -> Self {
        assert!(id.step <= MAX_STEP, "step index {} exceeds {MAX_STEP}", id.step);
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(id.chacha_stream());
        let mut stream = Self { key, id, draw: 0, rng };
        stream.seek();
        stream
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    /// Number of draws taken since the stream was positioned at its step.
    pub fn draw_index(&self) -> u64 {
        self.draw
    }

    /// Repositions the stream at draw 0 of `step`, keeping iteration and ant.
    pub fn at_step(&mut self, step: u32) {
        assert!(step <= MAX_STEP, "step index {step} exceeds {MAX_STEP}");
        self.id.step = step;
        self.draw = 0;
        self.seek();
    }

    fn seek(&mut self) {
        let pos = (u128::from(self.id.step) << DRAW_BITS) | u128::from(self.draw * 2);
        self.rng.set_word_pos(pos);
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    pub fn next_uniform(&mut self) -> f64 {
        debug_assert!(self.draw < (1 << (DRAW_BITS - 1)));
        self.draw += 1;
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
