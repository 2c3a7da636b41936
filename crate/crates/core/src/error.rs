use thiserror::Error;

/// Errors shared across the exact and Monte Carlo halves of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("rank mismatch: expected d = {expected}, got d = {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("invalid rank d = {0}; need d >= {1}")]
    InvalidRank(usize, usize),

    #[error("target rank {target} out of range for source rank {from}")]
    TargetRankOutOfRange { from: usize, target: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("state count {reached} exceeds cap {cap}; rerun with a smaller scale or a larger cap")]
    StateCapExceeded { cap: usize, reached: usize },

    #[error("weight entry {0} outside the supported enumeration range; reduce the scale")]
    EntryOutOfRange(String),

    #[error("moment order k = {k} exceeds the set-partition cap {cap} (Bell-number guard)")]
    MomentOrderCap { k: usize, cap: usize },

    #[error("need at least 2 samples, got {0}")]
    NotEnoughSamples(usize),

    #[error("variance parameter must be non-negative, got {0}")]
    NegativeVariance(f64),

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    EigensolverNoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
