//! Shared Poisson clocks.
//!
//! Every edge `(x, x+1)` of a site window carries an independent rate-1
//! Poisson process. All coupled processes (colored TASEP projections, the
//! oriented swap process, uncolored TASEPs) read their randomness from the
//! same [`ClockField`], which is what makes per-run identities between them
//! checkable with exact equality.
//!
//! Streams are keyed by `(seed, edge)`: the edge index selects a ChaCha8
//! stream, so the ring times of an edge never depend on the order in which
//! edges are read. Ring times are realized lazily and memoized.
//!
//! Ring times live on the dyadic grid `k * 2^-40`. Below [`MAX_EXACT_TIME`]
//! every such value, and every sum or difference of two of them, is an exact
//! `f64`, so passage-time recursions and their differences round-trip without
//! error.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid resolution of ring times, in ticks per unit time.
pub const TICKS_PER_UNIT: f64 = (1u64 << 40) as f64;

/// Largest time at which grid arithmetic is still exact in `f64`.
pub const MAX_EXACT_TIME: f64 = 4096.0;

const MAX_TICKS: u64 = 1u64 << 52;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `index` from a master seed.
///
/// Used for per-trial, per-permutation and per-role seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ mix64(index.wrapping_mul(0xd6e8_feb8_6659_fd93)))
}

/// A seeded ChaCha8 generator, the workhorse for all non-clock randomness.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Inclusive integer interval of lattice sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteWindow {
    pub min: i64,
    pub max: i64,
}

impl SiteWindow {
    pub fn new(min: i64, max: i64) -> Result<Self> {
        if min > max {
            return Err(Error::Config(format!("empty site window [{min}, {max}]")));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, x: i64) -> bool {
        self.min <= x && x <= self.max
    }

    /// Number of edges `(x, x+1)` with both ends inside the window.
    pub fn edge_count(&self) -> usize {
        (self.max - self.min) as usize
    }

    pub fn contains_edge(&self, left: i64) -> bool {
        self.min <= left && left < self.max
    }
}

#[derive(Debug, Clone)]
struct EdgeStream {
    rng: ChaCha8Rng,
    ticks: Vec<u64>,
    cursor: usize,
}

impl EdgeStream {
    fn new(seed: u64, edge: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(edge as u64);
        Self {
            rng,
            ticks: Vec::new(),
            cursor: 0,
        }
    }

    fn realize_next(&mut self) -> Result<u64> {
        let gap: f64 = Exp1.sample(&mut self.rng);
        let gap_ticks = ((gap * TICKS_PER_UNIT).round() as u64).max(1);
        let prev = self.ticks.last().copied().unwrap_or(0);
        let next = prev + gap_ticks;
        if next >= MAX_TICKS {
            return Err(Error::Resource(format!(
                "ring time beyond exact horizon {MAX_EXACT_TIME}"
            )));
        }
        self.ticks.push(next);
        Ok(next)
    }

    /// Index of the first ring with tick > `after`.
    fn first_after(&mut self, after: u64) -> Result<usize> {
        let start = if self.cursor > 0 && self.ticks[self.cursor - 1] > after {
            0
        } else {
            self.cursor
        };
        let mut idx = start + self.ticks[start..].partition_point(|&t| t <= after);
        while idx == self.ticks.len() {
            let t = self.realize_next()?;
            if t > after {
                break;
            }
            idx += 1;
        }
        self.cursor = idx;
        Ok(idx)
    }
}

/// Lazily realized, memoized Poisson ring times on every edge of a window.
#[derive(Debug, Clone)]
pub struct ClockField {
    seed: u64,
    window: SiteWindow,
    streams: Vec<Option<EdgeStream>>,
}

fn to_time(ticks: u64) -> f64 {
    ticks as f64 / TICKS_PER_UNIT
}

impl ClockField {
    pub fn new(seed: u64, window: SiteWindow) -> Result<Self> {
        let window = SiteWindow::new(window.min, window.max)?;
        Ok(Self {
            seed,
            window,
            streams: vec![None; window.edge_count()],
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn window(&self) -> SiteWindow {
        self.window
    }

    fn stream(&mut self, edge: i64) -> Result<&mut EdgeStream> {
        if !self.window.contains_edge(edge) {
            return Err(Error::Domain(format!(
                "edge ({edge}, {}) outside window [{}, {}]",
                edge + 1,
                self.window.min,
                self.window.max
            )));
        }
        let seed = self.seed;
        let slot = &mut self.streams[(edge - self.window.min) as usize];
        Ok(slot.get_or_insert_with(|| EdgeStream::new(seed, edge)))
    }

    /// Smallest ring time of edge `(edge, edge+1)` strictly greater than `after`.
    pub fn next_ring(&mut self, edge: i64, after: f64) -> Result<f64> {
        if after < 0.0 || after.is_nan() {
            return Err(Error::Domain(format!("negative query time {after}")));
        }
        let stream = self.stream(edge)?;
        // `after` may be off-grid; floor keeps "strictly greater" intact.
        let after_ticks = (after * TICKS_PER_UNIT).floor() as u64;
        let idx = stream.first_after(after_ticks)?;
        let mut t = stream.ticks[idx];
        let mut i = idx;
        while to_time(t) <= after {
            i += 1;
            t = match stream.ticks.get(i) {
                Some(&t) => t,
                None => stream.realize_next()?,
            };
        }
        Ok(to_time(t))
    }

    /// All ring times of the edge in `(0, until]`, realizing as needed.
    pub fn rings_until(&mut self, edge: i64, until: f64) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        let mut t = 0.0;
        loop {
            t = self.next_ring(edge, t)?;
            if t > until {
                return Ok(out);
            }
            out.push(t);
        }
    }

    /// Total number of ring times realized so far.
    pub fn realized_count(&self) -> usize {
        self.streams.iter().flatten().map(|s| s.ticks.len()).sum()
    }

    /// Whether all ring times realized so far, across all edges, are distinct.
    pub fn realized_distinct(&self) -> bool {
        let mut all: Vec<u64> = self
            .streams
            .iter()
            .flatten()
            .flat_map(|s| s.ticks.iter().copied())
            .collect();
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == n
    }
}
