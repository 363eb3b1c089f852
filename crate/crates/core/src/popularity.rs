//! Item universe: per-item average rates plus an inter-arrival law per item.
//!
//! Popularity is either Zipf(`alpha`) over `1..=n` or an explicit rate list.
//! All items of a catalog share one family shape and CV; each item's law is
//! fitted to mean `1/rate_x`.

use crate::dist::{Family, RenewalDist};
use crate::exec;
use crate::{Error, Result};

/// The universe of items feeding the first cache. Item ids are `1..=n` in
/// rate order for Zipf catalogs; index `i` holds item `i+1`.
#[derive(Debug, Clone)]
pub struct ItemCatalog {
    rates: Vec<f64>,
    laws: Vec<RenewalDist>,
    total_rate: f64,
}

impl ItemCatalog {
    /// Zipf popularity: `q_x ∝ x^(-alpha)`, `rate_x = q_x · total_rate`.
    pub fn zipf(n: usize, alpha: f64, total_rate: f64, family: Family, cv: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("catalog needs at least one item".into()));
        }
        if !(alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!("zipf exponent must be nonnegative, got {alpha}")));
        }
        if !(total_rate > 0.0) {
            return Err(Error::InvalidParameter(format!("total rate must be positive, got {total_rate}")));
        }
        let weights: Vec<f64> = (1..=n).map(|x| (x as f64).powf(-alpha)).collect();
        let norm = exec::stable_sum(&weights);
        let rates: Vec<f64> = weights.iter().map(|w| w / norm * total_rate).collect();
        Self::from_rates(rates, family, cv)
    }

    /// Explicit per-item rates (e.g. parsed from a CSV rate table).
    pub fn from_rates(rates: Vec<f64>, family: Family, cv: f64) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidParameter("catalog needs at least one item".into()));
        }
        for (i, &r) in rates.iter().enumerate() {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidParameter(format!("item {} has invalid rate {r}; zero-rate items are rejected", i + 1)));
            }
        }
        let laws = rates
            .iter()
            .map(|&r| RenewalDist::fit(family, 1.0 / r, cv))
            .collect::<Result<Vec<_>>>()?;
        let total_rate = exec::stable_sum(&rates);
        Ok(Self { rates, laws, total_rate })
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn total_rate(&self) -> f64 {
        self.total_rate
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn laws(&self) -> &[RenewalDist] {
        &self.laws
    }

    pub fn rate(&self, idx: usize) -> f64 {
        self.rates[idx]
    }

    pub fn law(&self, idx: usize) -> &RenewalDist {
        &self.laws[idx]
    }

    /// Long-term popularity share `q_x = rate_x / total`.
    pub fn popularity(&self, idx: usize) -> f64 {
        self.rates[idx] / self.total_rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_item_gets_everything() {
        let c = ItemCatalog::zipf(1, 0.8, 42.0, Family::Exponential, 1.0).unwrap();
        assert_relative_eq!(c.popularity(0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(c.rate(0), 42.0, epsilon = 1e-12);
    }

    #[test]
    fn two_items_alpha_one() {
        let c = ItemCatalog::zipf(2, 1.0, 1.0, Family::Exponential, 1.0).unwrap();
        assert_relative_eq!(c.popularity(0), 2.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(c.popularity(1), 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn four_items_alpha_08_against_direct_sum() {
        let c = ItemCatalog::zipf(4, 0.8, 1.0, Family::Exponential, 1.0).unwrap();
        // Direct-summation oracle.
        let s: f64 = (1..=4).map(|x| (x as f64).powf(-0.8)).sum();
        assert_relative_eq!(c.popularity(0), 1.0 / s, epsilon = 1e-14);
    }

    #[test]
    fn popularity_is_monotone_and_normalized() {
        let c = ItemCatalog::zipf(500, 0.8, 100.0, Family::Exponential, 1.0).unwrap();
        let mut total = 0.0;
        for i in 0..c.len() {
            if i > 0 {
                assert!(c.popularity(i) <= c.popularity(i - 1));
            }
            total += c.popularity(i);
        }
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn scaling_total_rate_scales_rates_only() {
        let a = ItemCatalog::zipf(50, 0.7, 10.0, Family::Exponential, 1.0).unwrap();
        let b = ItemCatalog::zipf(50, 0.7, 30.0, Family::Exponential, 1.0).unwrap();
        for i in 0..50 {
            assert_relative_eq!(b.rate(i), 3.0 * a.rate(i), max_relative = 1e-12);
            assert_relative_eq!(b.popularity(i), a.popularity(i), max_relative = 1e-12);
        }
    }

    #[test]
    fn law_means_match_inverse_rates() {
        let c = ItemCatalog::zipf(100, 0.8, 1000.0, Family::LogNormal, 2.0).unwrap();
        for i in 0..c.len() {
            assert_relative_eq!(c.law(i).mean(), 1.0 / c.rate(i), max_relative = 1e-9);
        }
    }

    #[test]
    fn zero_rate_rejected() {
        assert!(ItemCatalog::from_rates(vec![1.0, 0.0], Family::Exponential, 1.0).is_err());
    }

    #[test]
    fn infeasible_cv_propagates() {
        assert!(matches!(
            ItemCatalog::zipf(3, 0.8, 1.0, Family::HyperExp2, 0.5),
            Err(Error::InfeasibleCv { .. })
        ));
    }
}
