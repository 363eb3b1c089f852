//! Tandem evaluation: each cache level is solved on the stream it actually
//! sees. Level 1 sees the catalog; level `k+1` sees the per-item miss
//! streams of level `k`, represented as tabulated densities with rates
//! scaled by the per-level miss probabilities.
//!
//! Miss densities are exposed as lazy handles: solving a level only needs
//! hit probabilities and closed-form stats, so grids are materialized just
//! for the items that actually feed a next level (or that a caller asks
//! for).

use crate::che::{self, CacheConfig, TcSolution};
use crate::dist::RenewalDist;
use crate::exec;
use crate::miss::{self, GridConfig, MissDensity, MissStreamStats};
use crate::popularity::ItemCatalog;
use crate::{Error, Result};

/// A linear cascade: the catalog feeds level 1, misses cascade downstream.
#[derive(Debug, Clone)]
pub struct TandemScenario {
    pub catalog: ItemCatalog,
    pub capacities: Vec<usize>,
}

impl TandemScenario {
    pub fn new(catalog: ItemCatalog, capacities: Vec<usize>) -> Result<Self> {
        if capacities.is_empty() {
            return Err(Error::InvalidParameter("tandem needs at least one cache level".into()));
        }
        for (k, &c) in capacities.iter().enumerate() {
            if c == 0 {
                return Err(Error::InvalidParameter(format!("level {} has zero capacity", k + 1)));
            }
        }
        Ok(Self { catalog, capacities })
    }

    pub fn levels(&self) -> usize {
        self.capacities.len()
    }
}

/// Numerics knobs for a cascade evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CascadeOptions {
    /// Mass tolerance for miss densities (series truncation and grid tails).
    pub eps: f64,
    pub grid: GridConfig,
    /// Items whose miss rate falls below this floor are dropped from the
    /// next level's input; they contribute nothing measurable downstream.
    pub min_miss_rate: f64,
}

impl Default for CascadeOptions {
    fn default() -> Self {
        Self { eps: 1e-6, grid: GridConfig::default(), min_miss_rate: 1e-12 }
    }
}

/// The stream entering one cache level.
#[derive(Debug, Clone)]
pub struct LevelInput {
    /// Item ids (1-based, stable across levels).
    pub ids: Vec<u32>,
    pub rates: Vec<f64>,
    pub laws: Vec<RenewalDist>,
    /// Original catalog popularity of each item, carried for reporting.
    pub catalog_share: Vec<f64>,
}

impl LevelInput {
    pub fn from_catalog(catalog: &ItemCatalog) -> Self {
        let n = catalog.len();
        Self {
            ids: (1..=n as u32).collect(),
            rates: catalog.rates().to_vec(),
            laws: catalog.laws().to_vec(),
            catalog_share: (0..n).map(|i| catalog.popularity(i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn total_rate(&self) -> f64 {
        exec::stable_sum(&self.rates)
    }
}

/// Deferred miss-density computation for one item at one level.
#[derive(Debug, Clone)]
pub struct MissDensityHandle {
    law: RenewalDist,
    t_c: f64,
    eps: f64,
    grid: GridConfig,
}

impl MissDensityHandle {
    pub fn t_c(&self) -> f64 {
        self.t_c
    }

    /// Run the convolution series and build the grid.
    pub fn materialize(&self) -> Result<MissDensity> {
        miss::miss_pdf_with(&self.law, self.t_c, self.eps, &self.grid)
    }
}

/// Per-item results at one level.
#[derive(Debug, Clone)]
pub struct LevelItem {
    pub item: u32,
    pub input_rate: f64,
    /// Share of the stream entering this level.
    pub input_share: f64,
    pub hit_probability: f64,
    /// Closed-form miss-gap stats; absent when the item never misses.
    pub stats: Option<MissStreamStats>,
    /// Lazy miss density; absent when the item never misses.
    pub miss_density: Option<MissDensityHandle>,
}

/// One level of a tandem, fully solved.
#[derive(Debug, Clone)]
pub struct LevelReport {
    /// 1-based level index.
    pub level: usize,
    pub capacity: usize,
    pub solution: TcSolution,
    pub items: Vec<LevelItem>,
    /// Aggregate hit ratio weighted by the stream entering this level (the
    /// traffic this cache actually serves) - the headline number.
    pub hit_ratio_stream: f64,
    /// Same hit probabilities weighted by the original catalog popularity of
    /// the surviving items; at level 1 the two coincide.
    pub hit_ratio_catalog: f64,
    pub input_total_rate: f64,
    /// Items excluded from the next level: miss rate below the floor.
    pub dropped_items: Vec<u32>,
}

impl LevelReport {
    pub fn t_c(&self) -> f64 {
        self.solution.t_c()
    }

    /// Per-item hit probability by item id, if the item reached this level.
    pub fn hit_of(&self, item: u32) -> Option<f64> {
        self.items.iter().find(|it| it.item == item).map(|it| it.hit_probability)
    }
}

/// Solve one cache level on an explicit input stream.
pub fn evaluate_level(input: &LevelInput, cache: CacheConfig, opts: &CascadeOptions) -> Result<LevelReport> {
    let n = input.len();
    if n == 0 {
        return Err(Error::EmptyStream);
    }
    for (i, &r) in input.rates.iter().enumerate() {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("item {} enters the level with nonpositive rate {r}", input.ids[i])));
        }
    }

    let solution = che::solve_tc_over(&input.laws, &input.rates, cache.capacity())?;
    let t_c = solution.t_c();
    let total_rate = input.total_rate();

    let items: Vec<LevelItem> = exec::par_map_indexed(n, |i| {
        let law = &input.laws[i];
        let rate = input.rates[i];
        let share = rate / total_rate;
        let h = che::hit_probability(law, t_c);
        let (stats, handle) = if solution.is_all_hit() || 1.0 - h <= 0.0 {
            (None, None)
        } else {
            let stats = miss::miss_stats(input.ids[i], law, rate, share, t_c).ok();
            let handle = stats.as_ref().map(|_| MissDensityHandle {
                law: law.clone(),
                t_c,
                eps: opts.eps,
                grid: opts.grid,
            });
            (stats, handle)
        };
        LevelItem {
            item: input.ids[i],
            input_rate: rate,
            input_share: share,
            hit_probability: h,
            stats,
            miss_density: handle,
        }
    });

    let hs: Vec<f64> = items.iter().map(|it| it.hit_probability).collect();
    let hit_ratio_stream = che::weighted_hit(&input.rates, total_rate, &hs)?;
    let hit_ratio_catalog = exec::par_sum_by(n, |i| input.catalog_share[i] * hs[i]).clamp(0.0, 1.0);

    let dropped_items = items
        .iter()
        .filter(|it| it.stats.is_none_or(|s| s.miss_rate < opts.min_miss_rate))
        .map(|it| it.item)
        .collect();

    Ok(LevelReport {
        level: 1,
        capacity: cache.capacity(),
        solution,
        items,
        hit_ratio_stream,
        hit_ratio_catalog,
        input_total_rate: total_rate,
        dropped_items,
    })
}

/// Build the next level's input from a solved level: kept items keep their
/// ids and original shares, rates become miss rates, laws become the
/// materialized miss densities.
pub fn next_level_input(report: &LevelReport, input: &LevelInput, opts: &CascadeOptions) -> Result<LevelInput> {
    let kept: Vec<usize> = (0..report.items.len())
        .filter(|&i| {
            report.items[i]
                .stats
                .is_some_and(|s| s.miss_rate >= opts.min_miss_rate)
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyStream);
    }

    let laws = exec::par_map(&kept, |&i| {
        let handle = report.items[i].miss_density.as_ref().expect("kept items carry a density handle");
        handle.materialize().map(|md| RenewalDist::tabulated(md.density))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    // Report items are in input order, so index i refers to the same item.
    Ok(LevelInput {
        ids: kept.iter().map(|&i| report.items[i].item).collect(),
        rates: kept.iter().map(|&i| report.items[i].stats.unwrap().miss_rate).collect(),
        laws,
        catalog_share: kept.iter().map(|&i| input.catalog_share[i]).collect(),
    })
}

/// Evaluate a whole tandem, feeding each level the previous level's misses.
pub fn evaluate_tandem(scenario: &TandemScenario, opts: &CascadeOptions) -> Result<Vec<LevelReport>> {
    let mut input = LevelInput::from_catalog(&scenario.catalog);
    let mut reports = Vec::with_capacity(scenario.levels());
    for (k, &cap) in scenario.capacities.iter().enumerate() {
        let mut report = evaluate_level(&input, CacheConfig::new(cap)?, opts)?;
        report.level = k + 1;
        if k + 1 < scenario.levels() {
            let next = next_level_input(&report, &input, opts)?;
            reports.push(report);
            input = next;
        } else {
            reports.push(report);
        }
    }
    Ok(reports)
}
