//! Characteristic-time solver for one LRU cache and the hit probabilities
//! that follow from it.
//!
//! The expected occupancy of item `x` at horizon `t` is
//! `rate_x · ∫₀^t (1 - F_x(u)) du`; the characteristic time `t_c` is the
//! unique root of `Σ_x occupancy_x(t) = C`. The summand is nondecreasing in
//! `t`, so the root is bracketed by doubling and refined with Brent.

use crate::dist::RenewalDist;
use crate::exec;
use crate::popularity::ItemCatalog;
use crate::roots;
use crate::{Error, Result};

/// LRU cache sized in items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheConfig {
    capacity: usize,
}

impl CacheConfig {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter("cache capacity must be at least 1".into()));
        }
        Ok(Self { capacity })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

/// A solved characteristic time with solver diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicTime {
    pub t_c: f64,
    /// `|Σ_x occupancy_x(t_c) - C|` at the returned root.
    pub residual: f64,
    pub iterations: u32,
}

/// Solver outcome. A cache at least as large as the item universe never
/// evicts, which is reported explicitly rather than as a numeric infinity.
#[derive(Debug, Clone, Copy)]
pub enum TcSolution {
    /// `C >= N`: every request after first insertion hits.
    AllHit,
    Bounded(CharacteristicTime),
}

impl TcSolution {
    pub fn is_all_hit(&self) -> bool {
        matches!(self, TcSolution::AllHit)
    }

    /// Characteristic time; `+inf` for the all-hit case.
    pub fn t_c(&self) -> f64 {
        match self {
            TcSolution::AllHit => f64::INFINITY,
            TcSolution::Bounded(ct) => ct.t_c,
        }
    }
}

/// Expected fraction of time an item with the given law and rate spends in
/// the cache before the horizon `t`. Always in `[0, 1]`.
pub fn occupancy(law: &RenewalDist, rate: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    (rate * law.survival_integral(t)).min(1.0)
}

/// Hit probability of one item given a solved characteristic time:
/// `H_x = F_x(t_c)`, or 1 for the all-hit case.
pub fn hit_probability(law: &RenewalDist, t_c: f64) -> f64 {
    if !t_c.is_finite() {
        return 1.0;
    }
    if t_c <= 0.0 {
        return 0.0;
    }
    law.cdf_nn(t_c)
}

/// Aggregate hit ratio `H = Σ_x q_x H_x`.
pub fn aggregate_hit(catalog: &ItemCatalog, per_item_h: &[f64]) -> Result<f64> {
    weighted_hit(catalog.rates(), catalog.total_rate(), per_item_h)
}

/// Aggregate hit ratio with explicit stream rates as weights.
pub fn weighted_hit(rates: &[f64], total_rate: f64, per_item_h: &[f64]) -> Result<f64> {
    if rates.len() != per_item_h.len() {
        return Err(Error::LengthMismatch { left: rates.len(), right: per_item_h.len() });
    }
    let h = exec::par_sum_by(rates.len(), |i| rates[i] * per_item_h[i]) / total_rate;
    Ok(h.clamp(0.0, 1.0))
}

/// Solve the occupancy balance for a catalog feeding one cache.
pub fn solve_tc(catalog: &ItemCatalog, cache: CacheConfig) -> Result<TcSolution> {
    solve_tc_over(catalog.laws(), catalog.rates(), cache.capacity())
}

/// Solve over explicit per-item laws and rates (tabulated laws from a
/// previous cache level are valid inputs).
pub fn solve_tc_over(laws: &[RenewalDist], rates: &[f64], capacity: usize) -> Result<TcSolution> {
    let n = laws.len();
    if n != rates.len() {
        return Err(Error::LengthMismatch { left: n, right: rates.len() });
    }
    if n == 0 {
        return Err(Error::EmptyStream);
    }
    if capacity == 0 {
        return Err(Error::InvalidParameter("cache capacity must be at least 1".into()));
    }
    if capacity >= n {
        return Ok(TcSolution::AllHit);
    }

    let total_rate = exec::stable_sum(rates);
    let c = capacity as f64;
    // Small occupancies first limits cancellation; for rate-ordered catalogs
    // that is reverse index order.
    let g = |t: f64| exec::par_sum_by(n, |i| occupancy(&laws[n - 1 - i], rates[n - 1 - i], t)) - c;

    let hint = c / total_rate;
    let (lo, hi) = roots::bracket_upward(&g, hint, 200).ok_or_else(|| Error::SolverFailure {
        detail: "root not bracketable after 200 doublings".into(),
        last_t: hint * 2f64.powi(200),
        last_residual: f64::NAN,
    })?;

    let ftol = 1e-9 * c;
    let root = roots::brent(&g, lo, hi, ftol, 200);
    if !(root.residual.abs() <= ftol) {
        return Err(Error::SolverFailure {
            detail: format!("residual above tolerance {ftol}"),
            last_t: root.x,
            last_residual: root.residual,
        });
    }
    Ok(TcSolution::Bounded(CharacteristicTime {
        t_c: root.x,
        residual: root.residual.abs(),
        iterations: root.iterations,
    }))
}
