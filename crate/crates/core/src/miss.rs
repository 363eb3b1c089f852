//! Miss-stream characterization for one cache.
//!
//! Per item, a miss gap is one inter-arrival longer than `t_c` preceded by a
//! geometric number of shorter ones that were absorbed as hits. The density
//! of the miss inter-arrival time is therefore a series of convolutions of
//! the input density truncated at `t_c`: the low part (support `[0, t_c)`,
//! mass `H`) convolved `k` times against the high part (support `[t_c, ∞)`,
//! mass `1-H`), summed over `k` with geometric weights. The series is cut at
//! the smallest `K` with residual mass `H^(K+1) < eps`.
//!
//! Cell masses are exact CDF differences, so the captured mass bookkeeping is
//! exact; the convolutions run through one FFT per item using the closed
//! geometric sum per frequency. Closed forms cover the mean (input mean over
//! `1-H`), the variance and the squared CV of the miss gap.

use crate::dist::{RenewalDist, TabulatedDensity};
use crate::exec;
use crate::popularity::ItemCatalog;
use crate::{Error, Result};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Grid policy for tabulated miss densities.
#[derive(Debug, Clone, Copy)]
pub struct GridConfig {
    /// Cells between 0 and `t_c` (default 200). When `t_c` is far below the
    /// input mean, the step is tied to the mean instead so the grid keeps
    /// resolving the density; `t_c` always lands on a cell edge.
    pub cells_per_tc: usize,
    /// Stored-cell cap per density; results over it are coarsened.
    pub max_cells: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { cells_per_tc: 200, max_cells: 1 << 21 }
    }
}

impl GridConfig {
    /// Same policy with the base resolution scaled by `factor` (grid
    /// refinement studies).
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            cells_per_tc: self.cells_per_tc * factor,
            max_cells: self.max_cells.saturating_mul(factor),
        }
    }
}

/// Tabulated miss density plus series diagnostics.
#[derive(Debug, Clone)]
pub struct MissDensity {
    pub density: TabulatedDensity,
    /// Highest convolution order `K` included in the series.
    pub order: usize,
    /// Geometric residual mass `H^(K+1)` dropped by the truncation.
    pub series_residual: f64,
    pub hit_probability: f64,
}

/// Closed-form per-item miss-stream statistics.
#[derive(Debug, Clone, Copy)]
pub struct MissStreamStats {
    pub item: u32,
    /// Mean miss inter-arrival time.
    pub mean: f64,
    pub variance: f64,
    pub cv2: f64,
    /// Rate of misses leaving the cache: `rate · (1 - H)`.
    pub miss_rate: f64,
    /// Unnormalized miss popularity `q' = q (1 - H)`.
    pub popularity_share: f64,
}

/// Mean miss inter-arrival time: the input mean stretched by the miss
/// probability, `E[T] / (1 - H)`.
pub fn miss_mean(mean_in: f64, h: f64) -> Result<f64> {
    if h >= 1.0 {
        return Err(Error::EmptyMissStream);
    }
    Ok(mean_in / (1.0 - h))
}

/// Variance of the miss inter-arrival time:
/// `Var[T]/(1-H) - H (E[T]² - 2 E[T] E[T|T<=t_c]) / (1-H)²`.
pub fn miss_variance(law: &RenewalDist, t_c: f64) -> Result<f64> {
    let h = hit_at(law, t_c)?;
    let var = law.variance();
    if h == 0.0 {
        return Ok(var);
    }
    let mean = law.mean();
    let cond = law.conditional_mean_below(t_c)?;
    let miss = 1.0 - h;
    Ok(var / miss - h * (mean * mean - 2.0 * mean * cond) / (miss * miss))
}

/// Squared CV of the miss inter-arrival time:
/// `CV² (1-H) + H (2 E[T|T<=t_c]/E[T] - 1)`.
pub fn miss_cv2(law: &RenewalDist, t_c: f64) -> Result<f64> {
    let h = hit_at(law, t_c)?;
    let cv2 = law.cv2();
    if h == 0.0 {
        return Ok(cv2);
    }
    let cond = law.conditional_mean_below(t_c)?;
    Ok(cv2 * (1.0 - h) + h * (2.0 * cond / law.mean() - 1.0))
}

fn hit_at(law: &RenewalDist, t_c: f64) -> Result<f64> {
    if !(t_c > 0.0) || !t_c.is_finite() {
        return Err(Error::InvalidParameter(format!("t_c must be positive and finite, got {t_c}")));
    }
    let h = law.cdf_nn(t_c);
    if h >= 1.0 {
        return Err(Error::EmptyMissStream);
    }
    Ok(h)
}

/// Full per-item stats bundle used by the cascade reports.
pub fn miss_stats(item: u32, law: &RenewalDist, rate: f64, share: f64, t_c: f64) -> Result<MissStreamStats> {
    let h = hit_at(law, t_c)?;
    Ok(MissStreamStats {
        item,
        mean: miss_mean(law.mean(), h)?,
        variance: miss_variance(law, t_c)?,
        cv2: miss_cv2(law, t_c)?,
        miss_rate: rate * (1.0 - h),
        popularity_share: share * (1.0 - h),
    })
}

/// Miss popularity of a whole catalog: the unnormalized shares
/// `q' = q (1 - H)` and, unless every request hits, the shares renormalized
/// by the aggregate miss ratio.
#[derive(Debug, Clone)]
pub struct MissPopularity {
    pub unnormalized: Vec<f64>,
    pub normalized: Option<Vec<f64>>,
    pub aggregate_hit: f64,
}

pub fn miss_popularity(catalog: &ItemCatalog, per_item_h: &[f64]) -> Result<MissPopularity> {
    if catalog.len() != per_item_h.len() {
        return Err(Error::LengthMismatch { left: catalog.len(), right: per_item_h.len() });
    }
    let unnormalized: Vec<f64> = (0..catalog.len())
        .map(|i| catalog.popularity(i) * (1.0 - per_item_h[i]))
        .collect();
    let aggregate_hit = crate::che::aggregate_hit(catalog, per_item_h)?;
    let miss_ratio = 1.0 - aggregate_hit;
    let normalized = if miss_ratio > 0.0 {
        Some(unnormalized.iter().map(|q| q / miss_ratio).collect())
    } else {
        None
    };
    Ok(MissPopularity { unnormalized, normalized, aggregate_hit })
}

/// Smallest `K` with `H^(K+1) < eps`.
fn series_order(h: f64, eps: f64) -> usize {
    if h <= 0.0 {
        return 0;
    }
    let mut k = (eps.ln() / h.ln()).floor().max(0.0) as usize;
    while h.powi(k as i32 + 1) >= eps {
        k += 1;
    }
    while k > 0 && h.powi(k as i32) < eps {
        k -= 1;
    }
    k
}

/// Edge layout: `t_c` sits exactly on edge `ng`; edges below step by
/// `dt_low = t_c/ng` from zero, edges above step by `dt` from `t_c`.
/// Normally `dt_low == dt`; when `t_c` is smaller than one target step the
/// low side collapses to a single cell of width `t_c` that the convolution
/// treats as one pitch-`dt` cell (the positional error is below one step
/// and the involved mass is tiny).
#[derive(Clone, Copy)]
struct EdgeGrid {
    dt: f64,
    dt_low: f64,
    ng: usize,
    t_c: f64,
}

impl EdgeGrid {
    fn edge(&self, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match j.cmp(&self.ng) {
            Less => j as f64 * self.dt_low,
            Equal => self.t_c,
            Greater => self.t_c + (j - self.ng) as f64 * self.dt,
        }
    }
}

/// Numerical miss inter-arrival density via the truncated convolution
/// series, with the default grid policy.
pub fn miss_pdf(law: &RenewalDist, t_c: f64, eps: f64) -> Result<MissDensity> {
    miss_pdf_with(law, t_c, eps, &GridConfig::default())
}

pub fn miss_pdf_with(law: &RenewalDist, t_c: f64, eps: f64, grid: &GridConfig) -> Result<MissDensity> {
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1e-3], got {eps}")));
    }
    let h_prob = hit_at(law, t_c)?;
    let order = series_order(h_prob, eps);
    let series_residual = h_prob.powi(order as i32 + 1);
    let miss = 1.0 - h_prob;

    // Grid step: t_c/cells normally, with t_c forced onto a cell edge. When
    // t_c sits below one target step (hit probability near zero), the step
    // follows the input mean instead and the low side is one t_c-wide cell.
    let scale = t_c.max(law.mean());
    let dt_target = scale / grid.cells_per_tc as f64;
    let (mut ng, mut dt) = if t_c >= dt_target {
        let ng = (t_c / dt_target).round().max(1.0) as usize;
        (ng, t_c / ng as f64)
    } else {
        (1, dt_target)
    };

    // Window estimate: closed-form mean/sd of the miss gap plus a survival
    // probe of the input tail; the capture check below extends it if short.
    let mean_bar = law.mean() / miss;
    let sd_bar = miss_variance(law, t_c).unwrap_or(mean_bar * mean_bar).max(0.0).sqrt();
    let mut tail_probe = scale;
    while law.total_mass() - law.cdf_nn(t_c + tail_probe) > 0.005 * eps * miss && tail_probe < 1e18 * scale {
        tail_probe *= 2.0;
    }
    let mut window = (6.0 * mean_bar + 12.0 * sd_bar)
        .max(tail_probe + 2.0 * mean_bar)
        .max(4.0 * t_c);

    // Hard floor plus the tail-truncation point; when the series residual
    // already eats most of eps, cap the target just under what the truncated
    // series can deliver. An input law that is itself a truncated grid can
    // only deliver its own captured mass, scaled through the series; for
    // complete laws the cap must stay at or above 1 - eps, so the margin is
    // a fraction of whatever headroom the series leaves.
    let reachable = (law.total_mass() - h_prob).max(0.0) * (1.0 - series_residual) / miss;
    let base = (1.0 - eps).max((1.0 - eps / 10.0).min(1.0 - series_residual - 0.05 * eps));
    let gap = reachable - (1.0 - eps);
    let cap = if gap > 0.0 {
        reachable - (0.05 * eps).min(0.5 * gap)
    } else {
        reachable * (1.0 - 1e-9)
    };
    let target = base.min(cap);

    for attempt in 0..40 {
        // Memory guard: coarsen (keeping t_c on an edge) until the window
        // fits the cell cap.
        while window / dt > grid.max_cells as f64 {
            if ng > 1 {
                ng = ng.div_ceil(2);
                dt = t_c / ng as f64;
            } else {
                dt *= 2.0;
            }
        }
        let edges = EdgeGrid { dt, dt_low: t_c / ng as f64, ng, t_c };

        // Low part: exact cell masses below t_c, total telescopes to H.
        let low: Vec<f64> = if order == 0 {
            Vec::new()
        } else {
            (0..ng)
                .map(|j| (law.cdf_nn(edges.edge(j + 1)) - law.cdf_nn(edges.edge(j))).max(0.0))
                .collect()
        };

        let cells = ((window / dt).ceil() as usize).max(4);
        // High part: cell masses above t_c. Supports are nonnegative, so
        // truncating at the window end never changes in-window results.
        let high: Vec<f64> = (0..cells)
            .map(|j| (law.cdf_nn(edges.edge(ng + j + 1)) - law.cdf_nn(edges.edge(ng + j))).max(0.0))
            .collect();

        let masses = if order == 0 {
            high
        } else {
            convolve_series(&low, &high, order)
        };

        // Keep cells until the cumulative mass reaches the target.
        let mut cum = 0.0;
        let mut keep = None;
        for (j, &m) in masses.iter().enumerate() {
            cum += m;
            if cum >= target {
                keep = Some(j + 1);
                break;
            }
        }
        if let Some(keep) = keep {
            let kept = masses[..keep].to_vec();
            let captured = exec::stable_sum(&kept);
            let tail = (1.0 - captured).max(0.0);
            let density = TabulatedDensity::from_cell_masses(t_c, dt, kept, tail)?;
            debug_assert!(density.captured_mass() >= target - 1e-12);
            return Ok(MissDensity { density, order, series_residual, hit_probability: h_prob });
        }
        // Window too short: grow and retry.
        window *= if attempt < 6 { 1.7 } else { 2.5 };
    }
    Err(Error::SolverFailure {
        detail: format!("miss density window failed to capture {target} of the mass"),
        last_t: t_c + window,
        last_residual: series_residual,
    })
}

/// Sum of `high * low^(*k)` for `k = 0..=order`, on a shared cell grid, via
/// one FFT round: per frequency the geometric sum has the closed form
/// `(1 - (G·s)^(K+1)) / (1 - G·s)` where `s` is the half-cell smoothing
/// factor of the piecewise-uniform cell model.
fn convolve_series(low: &[f64], high: &[f64], order: usize) -> Vec<f64> {
    let window = high.len();
    // Twice the window keeps wrap-around clear of the kept range; mass that
    // would alias in sits many tail-lengths beyond the window.
    let pad = (2 * window + low.len() + 16).next_power_of_two();

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(pad);
    let ifft = planner.plan_fft_inverse(pad);

    let mut gbuf: Vec<Complex64> = low
        .iter()
        .map(|&m| Complex64::new(m, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(pad)
        .collect();
    let mut hbuf: Vec<Complex64> = high
        .iter()
        .map(|&m| Complex64::new(m, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(pad)
        .collect();
    fft.process(&mut gbuf);
    fft.process(&mut hbuf);

    let kp1 = order as f64 + 1.0;
    let step = -2.0 * std::f64::consts::PI / pad as f64;
    for (w, (g, h)) in gbuf.iter().zip(hbuf.iter_mut()).enumerate() {
        let phase = step * w as f64;
        let smooth = 0.5 * (Complex64::new(1.0, 0.0) + Complex64::new(0.0, phase).exp());
        let gs = g * smooth;
        let denom = Complex64::new(1.0, 0.0) - gs;
        let series = if denom.norm_sqr() < 1e-24 {
            // |G·s| ~ 1 only if H ~ 1 at frequency zero; sum degenerates.
            Complex64::new(kp1, 0.0)
        } else {
            // gs^(K+1) in polar form; magnitude <= H^(K+1).
            let r = gs.norm();
            let pow = if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(r.powf(kp1), gs.arg() * kp1)
            };
            (Complex64::new(1.0, 0.0) - pow) / denom
        };
        *h *= series;
    }
    ifft.process(&mut hbuf);

    let norm = 1.0 / pad as f64;
    // FFT rounding can leave ~1e-16 negatives; clamp them out.
    hbuf[..window].iter().map(|c| (c.re * norm).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exp_law(rate: f64) -> RenewalDist {
        RenewalDist::exponential(rate).unwrap()
    }

    /// Slow reference: term-by-term convolution with the same half-cell
    /// split, used to validate the FFT path.
    fn direct_series(low: &[f64], high: &[f64], order: usize) -> Vec<f64> {
        let window = high.len();
        let mut acc = vec![0.0; window];
        let mut term = high.to_vec();
        for k in 0..=order {
            for (a, t) in acc.iter_mut().zip(term.iter()) {
                *a += t;
            }
            if k == order {
                break;
            }
            let mut next = vec![0.0; window];
            for (i, &t) in term.iter().enumerate() {
                if t == 0.0 {
                    continue;
                }
                for (j, &g) in low.iter().enumerate() {
                    let half = 0.5 * t * g;
                    if i + j < window {
                        next[i + j] += half;
                    }
                    if i + j + 1 < window {
                        next[i + j + 1] += half;
                    }
                }
            }
            term = next;
        }
        acc
    }

    #[test]
    fn series_order_matches_minimal_rule() {
        // H = 1 - 1/e, eps = 1e-6: ceil(ln eps / ln H) - 1 = 30.
        let h = 1.0 - (-1f64).exp();
        assert_eq!(series_order(h, 1e-6), 30);
        assert_eq!(series_order(0.0, 1e-6), 0);
        assert_eq!(series_order(1e-9, 1e-6), 0);
        // Exactly at a power boundary the strict inequality forces one more.
        assert_eq!(series_order(0.1, 1e-3), 3);
        for (h, eps) in [(0.5, 1e-6), (0.99, 1e-4), (0.31, 1e-5)] {
            let k = series_order(h, eps);
            assert!(h.powi(k as i32 + 1) < eps);
            if k > 0 {
                assert!(h.powi(k as i32) >= eps);
            }
        }
    }

    #[test]
    fn fft_series_matches_direct_convolution() {
        let law = exp_law(1.0);
        let tc = 1.0;
        let ng = 40;
        let dt = tc / ng as f64;
        let low: Vec<f64> = (0..ng)
            .map(|j| law.cdf_nn((j + 1) as f64 * dt) - law.cdf_nn(j as f64 * dt))
            .collect();
        let high: Vec<f64> = (0..400)
            .map(|j| law.cdf_nn(tc + (j + 1) as f64 * dt) - law.cdf_nn(tc + j as f64 * dt))
            .collect();
        let order = 12;
        let fft = convolve_series(&low, &high, order);
        let direct = direct_series(&low, &high, order);
        for (a, b) in fft.iter().zip(direct.iter()) {
            assert!((a - b).abs() < 1e-12, "fft {a} vs direct {b}");
        }
    }

    #[test]
    fn miss_mean_examples() {
        assert_relative_eq!(miss_mean(1.0, 0.5).unwrap(), 2.0);
        assert_relative_eq!(miss_mean(3.0, 0.0).unwrap(), 3.0);
        assert!(matches!(miss_mean(1.0, 1.0), Err(Error::EmptyMissStream)));
    }

    #[test]
    fn miss_variance_transparent_cache() {
        // H = 0: variance passes through.
        let law = RenewalDist::fit_lognormal(1.0, 2.0).unwrap();
        let tc = 1e-12;
        assert_relative_eq!(miss_variance(&law, tc).unwrap(), law.variance(), max_relative = 1e-9);
    }

    #[test]
    fn exponential_cv2_closed_form() {
        // CV² of the miss gap simplifies to 1 - 2·x·exp(-x) with x = rate·t_c.
        for x in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let law = exp_law(1.0);
            let got = miss_cv2(&law, x).unwrap();
            assert!((got - (1.0 - 2.0 * x * (-x).exp())).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn cv2_equals_variance_over_mean_squared() {
        let laws = [
            exp_law(0.7),
            RenewalDist::fit_hyperexp2(1.3, 3.0).unwrap(),
            RenewalDist::fit_lognormal(0.6, 2.0).unwrap(),
        ];
        for law in laws {
            for tc in [0.2, 0.9, 2.5] {
                let h = law.cdf(tc).unwrap();
                let mean = miss_mean(law.mean(), h).unwrap();
                let var = miss_variance(&law, tc).unwrap();
                let cv2 = miss_cv2(&law, tc).unwrap();
                assert_relative_eq!(cv2, var / (mean * mean), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn miss_pdf_support_starts_at_tc() {
        let law = exp_law(1.0);
        let out = miss_pdf(&law, 1.0, 1e-6).unwrap();
        assert_eq!(out.density.support_offset(), 1.0);
        assert_eq!(out.density.cdf(0.999).unwrap(), 0.0);
        assert_eq!(out.density.pdf(0.5), 0.0);
        assert!(out.density.pdf(1.01) > 0.0);
    }

    #[test]
    fn miss_pdf_mass_and_order_contract() {
        for (law, tc) in [
            (exp_law(1.0), 1.0),
            (exp_law(2.0), 0.3),
            (RenewalDist::fit_hyperexp2(1.0, 3.0).unwrap(), 0.8),
            (RenewalDist::fit_lognormal(1.0, 2.0).unwrap(), 1.5),
        ] {
            let eps = 1e-6;
            let out = miss_pdf(&law, tc, eps).unwrap();
            let h = law.cdf(tc).unwrap();
            assert!(out.density.captured_mass() >= 1.0 - eps, "captured {}", out.density.captured_mass());
            assert!(out.density.captured_mass() <= 1.0 + 1e-12);
            assert!(out.series_residual < eps);
            let bound = (eps.ln() / h.ln()).ceil() as usize;
            assert!(out.order <= bound, "order {} bound {bound}", out.order);
        }
    }

    #[test]
    fn miss_pdf_grid_mean_matches_closed_form() {
        let law = exp_law(1.0);
        let tc = 2f64.ln();
        let out = miss_pdf(&law, tc, 1e-6).unwrap();
        // H = 1/2, so the miss gap mean is 2.
        assert_relative_eq!(out.density.mean(), 2.0, max_relative = 1e-4);
    }

    #[test]
    fn miss_pdf_moments_track_closed_forms() {
        let law = RenewalDist::fit_hyperexp2(1.0, 2.0).unwrap();
        let tc = 0.7;
        let h = law.cdf(tc).unwrap();
        let out = miss_pdf(&law, tc, 1e-8).unwrap();
        assert_relative_eq!(out.density.mean(), miss_mean(law.mean(), h).unwrap(), max_relative = 1e-3);
        assert_relative_eq!(out.density.variance(), miss_variance(&law, tc).unwrap(), max_relative = 1e-3);
    }

    #[test]
    fn transparent_cache_returns_input_density() {
        // No mass below t_c: the k = 0 term is the whole density.
        let law = exp_law(1.0);
        let tc = 1e-9;
        let out = miss_pdf(&law, tc, 1e-6).unwrap();
        assert_eq!(out.order, 0);
        for (t, v) in out.density.points().take(200) {
            assert_relative_eq!(v, law.pdf(t), max_relative = 1e-3, epsilon = 1e-6);
        }
    }

    #[test]
    fn all_hit_input_is_rejected() {
        // Tabulated law whose whole support sits below t_c.
        let g = TabulatedDensity::from_cdf(0.0, 0.01, 100, |t| (t / 1.0).min(1.0)).unwrap();
        let law = RenewalDist::tabulated(g);
        assert!(matches!(miss_pdf(&law, 5.0, 1e-6), Err(Error::EmptyMissStream)));
    }

    #[test]
    fn miss_popularity_shares() {
        use crate::dist::Family;
        let catalog = ItemCatalog::from_rates(vec![2.0, 1.0], Family::Exponential, 1.0).unwrap();
        // Golden-ratio fixed point of the (2, 1)-rate, C = 1 scenario.
        let u = 0.618033988749895f64;
        let hs = [1.0 - u * u, 1.0 - u];
        let pop = miss_popularity(&catalog, &hs).unwrap();
        assert_relative_eq!(pop.unnormalized[0], (2.0 / 3.0) * u * u, epsilon = 1e-12);
        assert_relative_eq!(pop.unnormalized[1], (1.0 / 3.0) * u, epsilon = 1e-12);
        let total: f64 = pop.unnormalized.iter().sum();
        assert_relative_eq!(total, 1.0 - pop.aggregate_hit, epsilon = 1e-12);
        let norm_total: f64 = pop.normalized.unwrap().iter().sum();
        assert_relative_eq!(norm_total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn miss_popularity_transparent_cache() {
        use crate::dist::Family;
        let catalog = ItemCatalog::zipf(5, 0.8, 1.0, Family::Exponential, 1.0).unwrap();
        let pop = miss_popularity(&catalog, &[0.0; 5]).unwrap();
        for i in 0..5 {
            assert_relative_eq!(pop.unnormalized[i], catalog.popularity(i), epsilon = 1e-14);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            // The squared CV expression is an algebraic rewrite of
            // variance over squared mean; both routes must agree.
            #[test]
            fn cv2_identity_holds(mean in 0.2f64..5.0, cv in 1.0f64..5.0, frac in 0.05f64..4.0) {
                let law = RenewalDist::fit_hyperexp2(mean, cv).unwrap();
                let tc = mean * frac;
                let h = law.cdf(tc).unwrap();
                prop_assume!(h < 1.0);
                let m = miss_mean(law.mean(), h).unwrap();
                let v = miss_variance(&law, tc).unwrap();
                let c2 = miss_cv2(&law, tc).unwrap();
                prop_assert!((c2 - v / (m * m)).abs() <= 1e-9 * c2.abs().max(1.0));
            }

            // Filtering can only stretch the gap: the miss mean dominates
            // the input mean, with equality at H = 0.
            #[test]
            fn miss_mean_dominates_input_mean(mean in 0.2f64..5.0, h in 0.0f64..0.999) {
                let m = miss_mean(mean, h).unwrap();
                prop_assert!(m >= mean);
            }
        }
    }

    #[test]
    fn smoothing_is_strongest_at_unit_rate_tc_product() {
        // For exponential input the miss-gap CV² over x = rate·t_c dips at x = 1.
        let law = exp_law(1.0);
        let xs: Vec<f64> = (1..=300).map(|i| i as f64 * 0.01).collect();
        let cv2s: Vec<f64> = xs.iter().map(|&x| miss_cv2(&law, x).unwrap()).collect();
        let (imin, _) = cv2s
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert!((xs[imin] - 1.0).abs() <= 0.01 + 1e-12);
    }
}
