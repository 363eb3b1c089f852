//! Discrete-event simulator for a tandem of LRU caches under per-item
//! renewal traffic: the ground truth the analytic model is checked against.
//!
//! Per-item next-arrival times live in a priority queue. Each arrival walks
//! down the cache levels until it hits (or exhausts them); on the way back
//! the item is inserted into every level it missed (leave-a-copy-everywhere).
//! A miss cascades with zero latency, matching the model's lack of a latency
//! notion. Statistics are collected after a warmup prefix of requests, and a
//! fixed seed reproduces the run exactly.

mod lru;

pub use lru::LruCache;

use crate::cascade::TandemScenario;
use crate::stats::Histogram;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Simulation run description.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub scenario: TandemScenario,
    /// Requests discarded before measuring. Defaults (via [`SimConfig::new`])
    /// to `max(10·ΣC, 1e5)`: the caches must reach stationary occupancy.
    pub warmup: u64,
    /// Requests measured after warmup.
    pub measured: u64,
    pub seed: u64,
    /// Item ids (1-based) whose miss inter-arrival gaps are recorded at
    /// every level.
    pub traced_items: Vec<u32>,
}

impl SimConfig {
    pub fn new(scenario: TandemScenario, measured: u64, seed: u64) -> Self {
        let total_capacity: usize = scenario.capacities.iter().sum();
        Self {
            scenario,
            warmup: (10 * total_capacity as u64).max(100_000),
            measured,
            seed,
            traced_items: Vec::new(),
        }
    }

    pub fn with_warmup(mut self, warmup: u64) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn with_traced_items(mut self, items: Vec<u32>) -> Self {
        self.traced_items = items;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.measured == 0 {
            return Err(Error::InvalidSimConfig("measured request count must be at least 1".into()));
        }
        let n = self.scenario.catalog.len() as u32;
        for &item in &self.traced_items {
            if item == 0 || item > n {
                return Err(Error::InvalidSimConfig(format!("traced item {item} outside 1..={n}")));
            }
        }
        Ok(())
    }
}

/// Post-warmup hit/miss counts of one level, indexed by item - 1.
#[derive(Debug, Clone)]
pub struct SimLevelCounts {
    pub hits: Vec<u64>,
    pub misses: Vec<u64>,
}

impl SimLevelCounts {
    /// Requests that reached this level for one item.
    pub fn requests(&self, idx: usize) -> u64 {
        self.hits[idx] + self.misses[idx]
    }

    pub fn total_hits(&self) -> u64 {
        self.hits.iter().sum()
    }

    pub fn total_requests(&self) -> u64 {
        self.total_hits() + self.misses.iter().sum::<u64>()
    }

    /// Aggregate hit ratio of the stream entering this level.
    pub fn aggregate_hit(&self) -> f64 {
        let total = self.total_requests();
        if total == 0 {
            return 0.0;
        }
        self.total_hits() as f64 / total as f64
    }

    /// Per-item hit frequency, if the item was requested here.
    pub fn hit_frequency(&self, idx: usize) -> Option<f64> {
        let r = self.requests(idx);
        (r > 0).then(|| self.hits[idx] as f64 / r as f64)
    }
}

/// Recorded miss inter-arrival gaps for one traced (level, item) pair.
#[derive(Debug, Clone)]
pub struct MissTrace {
    /// 1-based level index.
    pub level: usize,
    pub item: u32,
    pub gaps: Vec<f64>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct SimReport {
    pub levels: Vec<SimLevelCounts>,
    pub traces: Vec<MissTrace>,
    /// Simulated clock at the last processed request.
    pub elapsed_sim_time: f64,
    pub warmup: u64,
    pub measured: u64,
    pub seed: u64,
}

impl SimReport {
    pub fn trace(&self, level: usize, item: u32) -> Result<&MissTrace> {
        self.traces
            .iter()
            .find(|t| t.level == level && t.item == item)
            .ok_or(Error::UntracedItem { level, item })
    }
}

/// Normalized histogram of the miss gaps of a traced item, or `None` when
/// the item never missed twice at that level.
pub fn miss_trace_histogram(report: &SimReport, level: usize, item: u32, bin_width: f64) -> Result<Option<Histogram>> {
    let trace = report.trace(level, item)?;
    if trace.gaps.is_empty() {
        return Ok(None);
    }
    Histogram::from_samples(&trace.gaps, bin_width).map(Some)
}

#[derive(PartialEq)]
struct Arrival {
    time: f64,
    item: u32,
}

impl Eq for Arrival {}

impl Ord for Arrival {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we need earliest-first.
        // Item id breaks (measure-zero) time ties deterministically.
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.item.cmp(&self.item))
    }
}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Run the event-driven simulation.
pub fn run_sim(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let catalog = &config.scenario.catalog;
    let n = catalog.len();
    let levels = config.scenario.levels();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut caches: Vec<LruCache> = config
        .scenario
        .capacities
        .iter()
        .map(|&c| LruCache::new(c, n))
        .collect();
    let mut hits = vec![vec![0u64; n]; levels];
    let mut misses = vec![vec![0u64; n]; levels];

    // Trace bookkeeping: dense item -> trace slot map.
    let mut trace_slot = vec![u32::MAX; n];
    let mut traced_sorted = config.traced_items.clone();
    traced_sorted.sort_unstable();
    traced_sorted.dedup();
    for (s, &item) in traced_sorted.iter().enumerate() {
        trace_slot[(item - 1) as usize] = s as u32;
    }
    let n_traced = traced_sorted.len();
    let mut gaps: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); n_traced]; levels];
    let mut last_miss = vec![vec![f64::NAN; n_traced]; levels];

    // Stationary start: each item's first arrival comes from its
    // forward-recurrence law, as if the renewal processes had been running
    // forever. The warmup then only has to fill the caches.
    let mut queue = BinaryHeap::with_capacity(n + 1);
    for idx in 0..n {
        let t = catalog.law(idx).sample_forward_recurrence(&mut rng);
        queue.push(Arrival { time: t, item: idx as u32 });
    }

    let total_requests = config.warmup + config.measured;
    let mut now = 0.0;
    for processed in 0..total_requests {
        let arrival = queue.pop().expect("queue holds one arrival per item");
        now = arrival.time;
        let item = arrival.item;
        let idx = item as usize;
        let record = processed >= config.warmup;

        let mut hit_level = levels;
        for (lvl, cache) in caches.iter_mut().enumerate() {
            if cache.touch(item) {
                if record {
                    hits[lvl][idx] += 1;
                }
                hit_level = lvl;
                break;
            }
            if record {
                misses[lvl][idx] += 1;
            }
            let slot = trace_slot[idx];
            if slot != u32::MAX {
                let s = slot as usize;
                let prev = last_miss[lvl][s];
                if record && !prev.is_nan() {
                    gaps[lvl][s].push(now - prev);
                }
                last_miss[lvl][s] = now;
            }
        }
        // Leave a copy in every level the request missed.
        for cache in caches.iter_mut().take(hit_level) {
            cache.insert(item);
        }

        let next = now + catalog.law(idx).sample(&mut rng);
        queue.push(Arrival { time: next, item });
    }

    let mut traces = Vec::with_capacity(levels * n_traced);
    for (lvl, per_level) in gaps.into_iter().enumerate() {
        for (s, g) in per_level.into_iter().enumerate() {
            traces.push(MissTrace { level: lvl + 1, item: traced_sorted[s], gaps: g });
        }
    }

    Ok(SimReport {
        levels: hits
            .into_iter()
            .zip(misses)
            .map(|(h, m)| SimLevelCounts { hits: h, misses: m })
            .collect(),
        traces,
        elapsed_sim_time: now,
        warmup: config.warmup,
        measured: config.measured,
        seed: config.seed,
    })
}
