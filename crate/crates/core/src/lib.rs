//! Analytic performance model for cascades of LRU caches fed by renewal
//! traffic, paired with a discrete-event simulator used as ground truth.
//!
//! The model works per item: each item `x` generates requests whose
//! inter-arrival times are i.i.d. with a known distribution. A single LRU
//! cache is summarized by its characteristic time `t_c` (the root of the
//! occupancy balance equation), which yields per-item hit probabilities
//! `H_x = F_x(t_c)`. The stream of misses leaving the cache is again renewal
//! per item; its density, mean, variance and CV² are computed here, and the
//! tabulated miss density can be fed to the next cache of a tandem.
//!
//! Modules:
//! - [`dist`]: inter-arrival laws (exponential, 2-phase hyper-exponential,
//!   lognormal, tabulated) with truncated-moment queries and sampling.
//! - [`popularity`]: item catalogs, Zipf or explicit rates.
//! - [`che`]: characteristic-time solver and hit probabilities.
//! - [`miss`]: miss-stream statistics and the truncated convolution series
//!   for the miss inter-arrival density.
//! - [`cascade`]: per-level evaluation chained across a tandem.
//! - [`sim`]: event-driven LRU tandem simulator.
//! - [`stats`]: Kolmogorov-Smirnov tests and histograms used for validation.

pub mod cascade;
pub mod che;
pub mod dist;
mod error;
pub mod exec;
pub mod miss;
pub mod popularity;
pub mod quad;
pub mod roots;
pub mod sim;
pub mod stats;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
