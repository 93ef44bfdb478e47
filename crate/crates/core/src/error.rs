use thiserror::Error;

/// Errors shared across the character computations and the cache layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A coefficient at q-degree `requested` was asked of a series only
    /// known up to `cutoff`. The answer would be unreliable, not zero.
    #[error("coefficient query at q-degree {requested} exceeds series cutoff {cutoff}")]
    QueryBeyondCutoff { requested: u32, cutoff: u32 },

    #[error("weight has {got} components, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The quasi-particle and fermionic paths are defined only for weights
    /// of shape (k0, k1, 0) or (0, k1, k2).
    #[error("weight ({0}) is outside the supported shapes (k0,k1,0) and (0,k1,k2)")]
    UnsupportedWeight(String),

    #[error("charge {charge} out of range 1..={level}")]
    ChargeOutOfRange { charge: u32, level: u32 },

    #[error("no cached series for {0}")]
    CacheMiss(String),

    #[error("cache entry {path} is corrupt: {reason}")]
    CacheCorrupt { path: String, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
