//! Seeded generators for step functions, grids and cell sets.
//!
//! All randomness comes from SplitMix64; floats in `[0,1)` are built from the
//! top 53 bits of each output, so a sequence can be replayed bit for bit in
//! any language.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::mixed::{CellSet, GridFn};
use crate::step::StepFn;

/// Identifier recorded in reports.
pub const RNG_ALGORITHM: &str = "splitmix64; uniform = (next >> 11) * 2^-53";

pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Seed for a named stream, independent of the order streams are used in.
    pub fn stream_seed(seed: u64, name: &str) -> u64 {
        // FNV-1a over the name, mixed into the base seed.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in name.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        seed ^ h
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.next_u64() % (hi - lo + 1)
    }

    pub fn choose<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.int(0, items.len() as u64 - 1) as usize]
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Random step function on `(0,1)` with 1..=8 pieces and integer levels
    /// in `0..=8`.
    pub fn step(&mut self) -> StepFn {
        let pieces = self.int(1, 8) as usize;
        let mut ends: Vec<f64> = (0..pieces - 1).map(|_| self.uniform()).filter(|&t| t > 0.0).collect();
        ends.sort_by(f64::total_cmp);
        ends.dedup();
        ends.push(1.0);
        let values = (0..ends.len()).map(|_| self.int(0, 8) as f64).collect();
        StepFn::new(1.0, ends, values).expect("generated breakpoints are increasing")
    }

    /// Random nonzero step function.
    pub fn nonzero_step(&mut self) -> StepFn {
        loop {
            let f = self.step();
            if !f.is_zero() {
                return f;
            }
        }
    }

    /// Random grid with integer levels in `0..=levels`; a random fraction of
    /// cells is zeroed so supports vary.
    pub fn grid(&mut self, n: usize, cells: usize, levels: u64) -> Result<GridFn> {
        let total = cells.pow(n as u32);
        let density = 0.2 + 0.8 * self.uniform();
        let values = (0..total)
            .map(|_| {
                if self.bernoulli(density) {
                    self.int(1, levels) as f64
                } else {
                    0.0
                }
            })
            .collect();
        GridFn::new(n, cells, values)
    }

    /// Random grid of a random size from `sizes`.
    pub fn grid_in(&mut self, n: usize, sizes: &[usize], levels: u64) -> Result<GridFn> {
        let cells = self.choose(sizes);
        self.grid(n, cells, levels)
    }

    /// Random cell set, either scattered cells or a union of a few boxes.
    pub fn cellset(&mut self, n: usize, cells: usize) -> Result<CellSet> {
        let total = cells.pow(n as u32);
        if self.bernoulli(0.5) {
            let density = self.uniform();
            let members = (0..total).map(|_| self.bernoulli(density)).collect();
            return CellSet::from_members(n, cells, members);
        }
        let mut members = vec![false; total];
        for _ in 0..self.int(1, 3) {
            let b = self.axis_box(n, cells)?;
            for (m, &inside) in members.iter_mut().zip(b.members()) {
                *m |= inside;
            }
        }
        CellSet::from_members(n, cells, members)
    }

    /// Random nonempty axis box.
    pub fn axis_box(&mut self, n: usize, cells: usize) -> Result<CellSet> {
        let (lo, hi) = self.box_bounds(n, cells);
        CellSet::axis_box(n, cells, &lo, &hi)
    }

    pub fn box_bounds(&mut self, n: usize, cells: usize) -> (Vec<usize>, Vec<usize>) {
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for _ in 0..n {
            let a = self.int(0, cells as u64 - 1) as usize;
            let b = self.int(a as u64 + 1, cells as u64) as usize;
            lo.push(a);
            hi.push(b);
        }
        (lo, hi)
    }
}
