//! Data-parallel helpers with a sequential fallback.
//!
//! Built with the `parallel` feature (default), the per-item loops fan out
//! over rayon; without it they run sequentially with identical results.
//! Summation is compensated and chunked so the outcome is bit-identical
//! regardless of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const SUM_CHUNK: usize = 4096;

/// Map `f` over `items`, in parallel when enabled.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Map `f` over indices `0..n`, in parallel when enabled.
pub fn par_map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Neumaier-compensated sum; stable for long vectors of tiny terms.
pub fn stable_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Evaluate `f` per index and sum. Chunked so parallel and sequential builds
/// reduce in the same order (per-chunk compensated sums, then a compensated
/// sum over chunks in index order).
pub fn par_sum_by<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunk_sums: Vec<f64> = {
        let nchunks = n.div_ceil(SUM_CHUNK);
        #[cfg(feature = "parallel")]
        {
            (0..nchunks)
                .into_par_iter()
                .map(|c| {
                    let lo = c * SUM_CHUNK;
                    let hi = (lo + SUM_CHUNK).min(n);
                    let vals: Vec<f64> = (lo..hi).map(&f).collect();
                    stable_sum(&vals)
                })
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..nchunks)
                .map(|c| {
                    let lo = c * SUM_CHUNK;
                    let hi = (lo + SUM_CHUNK).min(n);
                    let vals: Vec<f64> = (lo..hi).map(&f).collect();
                    stable_sum(&vals)
                })
                .collect()
        }
    };
    stable_sum(&chunk_sums)
}
