//! Count-min sketch over node ids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::temporal_graph::NodeId;

const PRIME: u64 = (1 << 61) - 1;

/// `depth × width` counters; each row hashes with `((a·x + b) mod p) mod width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMinSketch {
    width: usize,
    depth: usize,
    hashes: Vec<(u64, u64)>,
    counters: Vec<u64>,
    total: u64,
}

impl CountMinSketch {
    /// Width `⌈e/ε⌉`, depth `⌈ln(1/δ)⌉`: with probability `1 − δ` a query
    /// overestimates by at most `ε·N`, `N` the number of updates.
    pub fn new(eps: f64, delta: f64, seed: u64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "count-min needs 0 < eps, delta < 1 (got {eps}, {delta})"
            )));
        }
        let width = (std::f64::consts::E / eps).ceil() as usize;
        let depth = ((1.0 / delta).ln().ceil() as usize).max(1);
        Ok(Self::with_dimensions(width, depth, seed))
    }

    pub fn with_dimensions(width: usize, depth: usize, seed: u64) -> Self {
        assert!(width > 0 && depth > 0, "sketch dimensions must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hashes = (0..depth)
            .map(|_| (rng.gen_range(1..PRIME), rng.gen_range(0..PRIME)))
            .collect();
        Self {
            width,
            depth,
            hashes,
            counters: vec![0; width * depth],
            total: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of updates so far.
    pub fn total(&self) -> u64 {
        self.total
    }

    fn slot(&self, row: usize, v: NodeId) -> usize {
        let (a, b) = self.hashes[row];
        let h = ((a as u128 * v as u128 + b as u128) % PRIME as u128) as u64;
        row * self.width + (h % self.width as u64) as usize
    }

    pub fn update(&mut self, v: NodeId) {
        self.add(v, 1);
    }

    pub fn add(&mut self, v: NodeId, count: u64) {
        for row in 0..self.depth {
            let s = self.slot(row, v);
            self.counters[s] += count;
        }
        self.total += count;
    }

    /// Minimum over rows; never below the true count.
    pub fn query(&self, v: NodeId) -> u64 {
        (0..self.depth)
            .map(|row| self.counters[self.slot(row, v)])
            .min()
            .unwrap_or(0)
    }

    /// Same dimensions and hashes, zero counters.
    pub fn cleared(&self) -> Self {
        Self {
            counters: vec![0; self.counters.len()],
            total: 0,
            ..self.clone()
        }
    }
}
