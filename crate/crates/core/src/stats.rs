//! Goodness-of-fit helpers used to compare simulation against the model:
//! one- and two-sample Kolmogorov-Smirnov statistics and normalized
//! histograms of miss inter-arrival gaps.

use crate::{Error, Result};

/// Two-sample KS statistic: the supremum distance between the empirical
/// CDFs. Inputs need not be sorted.
pub fn ks2_statistic(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(!xs.is_empty() && !ys.is_empty(), "KS needs nonempty samples");
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_unstable_by(|p, q| p.total_cmp(q));
    b.sort_unstable_by(|p, q| p.total_cmp(q));

    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Consume every value tied at the current point from both samples
        // before comparing the empirical CDFs.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// One-sample KS statistic against a reference CDF.
pub fn ks1_statistic<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    assert!(!xs.is_empty(), "KS needs nonempty samples");
    let mut a = xs.to_vec();
    a.sort_unstable_by(|p, q| p.total_cmp(q));
    let n = a.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in a.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Asymptotic two-sample critical value at significance `alpha`:
/// `c(alpha)·sqrt((n+m)/(n·m))` with `c(alpha) = sqrt(-ln(alpha/2)/2)`.
pub fn ks2_critical(n: usize, m: usize, alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Lag-1 autocorrelation of a series; `None` below three samples or at zero
/// variance. Used as a diagnostic for how renewal-like a simulated miss
/// stream is (the model treats successive gaps as independent).
pub fn lag1_autocorrelation(xs: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 3 {
        return None;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    if var <= 0.0 {
        return None;
    }
    let cov: f64 = xs
        .windows(2)
        .map(|w| (w[0] - mean) * (w[1] - mean))
        .sum::<f64>()
        / (n - 1) as f64;
    Some(cov / var)
}

/// Normalized histogram: bin `i` covers `[origin + i·width, origin + (i+1)·width)`
/// and stores a density value, so the histogram integrates to one.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub origin: f64,
    pub width: f64,
    pub densities: Vec<f64>,
    pub count: usize,
}

impl Histogram {
    /// Bin nonnegative samples with the given width, origin zero.
    pub fn from_samples(samples: &[f64], width: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("histogram needs at least one sample".into()));
        }
        if !(width > 0.0) {
            return Err(Error::InvalidParameter(format!("bin width must be positive, got {width}")));
        }
        let max = samples.iter().cloned().fold(0.0f64, f64::max);
        let bins = ((max / width).floor() as usize) + 1;
        let mut counts = vec![0u64; bins];
        for &s in samples {
            counts[((s / width) as usize).min(bins - 1)] += 1;
        }
        let norm = 1.0 / (samples.len() as f64 * width);
        Ok(Self {
            origin: 0.0,
            width,
            densities: counts.iter().map(|&c| c as f64 * norm).collect(),
            count: samples.len(),
        })
    }

    /// Fraction of mass strictly below `t`.
    pub fn mass_below(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &d) in self.densities.iter().enumerate() {
            let lo = self.origin + i as f64 * self.width;
            let hi = lo + self.width;
            if hi <= t {
                acc += d * self.width;
            } else if lo < t {
                acc += d * (t - lo);
            } else {
                break;
            }
        }
        acc
    }

    pub fn integral(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.width
    }
}
