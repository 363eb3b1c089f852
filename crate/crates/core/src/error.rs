use thiserror::Error;

/// Errors produced by model construction, solving and simulation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A time argument was negative where the domain is [0, ∞).
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    /// A constructor or fit was given parameters outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Requested coefficient of variation cannot be realized by the family.
    #[error("coefficient of variation {cv} infeasible for {family}")]
    InfeasibleCv { family: &'static str, cv: f64 },

    /// Conditional mean below t_c is undefined because F(t_c) = 0.
    #[error("conditional mean undefined: no probability mass below t_c = {0}")]
    NoMassBelow(f64),

    /// An item never misses (H = 1), so it has no miss stream.
    #[error("no miss stream: hit probability is 1")]
    EmptyMissStream,

    /// Characteristic-time solver could not bracket or refine the root.
    #[error("characteristic-time solver failed: {detail} (last t = {last_t}, residual = {last_residual})")]
    SolverFailure {
        detail: String,
        last_t: f64,
        last_residual: f64,
    },

    /// A cascade level was left with no items carrying traffic.
    #[error("empty stream: no items with positive rate remain")]
    EmptyStream,

    /// Two per-item vectors that must be aligned have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Simulation config rejected before running.
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    /// A per-(level, item) trace was requested but never recorded.
    #[error("item {item} was not traced at level {level}")]
    UntracedItem { level: usize, item: u32 },
}
