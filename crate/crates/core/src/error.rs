//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// No finite grid resolution can certify the approximation guarantee.
    /// This happens exactly when delta = eps: the inward rounding always
    /// loses a positive fraction of volume.
    #[error("no finite grid resolution for dim={dim}, eps={eps}, delta={delta} (requires delta < eps)")]
    NoGridResolution { dim: usize, eps: f64, delta: f64 },

    #[error("net cardinality cap exceeded: predicted {predicted:.3e} elements, cap {cap}")]
    NetCapExceeded { predicted: f64, cap: u64 },

    /// The two-phase size formula needs delta * |net| >= e.
    #[error("two-phase hypothesis failed: delta * net_size = {product:.6} < e (delta={delta}, net_size={net_size})")]
    TwoPhaseHypothesis {
        delta: f64,
        net_size: usize,
        product: f64,
    },

    /// The pure-random size formula needs |net| >= 3.
    #[error("random-only hypothesis failed: net_size = {net_size} < 3")]
    RandomOnlyHypothesis { net_size: usize },

    #[error("exact evaluation cap exceeded: dim={dim}, points={points} (caps: dim <= {dim_cap}, points <= {point_cap}); use the estimator instead")]
    ExactnessCap {
        dim: usize,
        points: usize,
        dim_cap: usize,
        point_cap: usize,
    },

    #[error("rejection sampling stalled: drew {draws} boxes without reaching volume >= {eps}")]
    SamplingStalled { draws: u64, eps: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
