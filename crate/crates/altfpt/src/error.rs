//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong between config parsing and file output.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter failed its validity constraint (non-finite value,
    /// non-positive scale, barrier at or below the start state, ...).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// An argument left the domain of an operation (negative time,
    /// state above the barrier, empty grid, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The cdf upper bound is only established for equal diffusion scales.
    #[error(
        "cdf upper bound requires equal diffusion scales, got sigma1 = {sigma1} and sigma2 = {sigma2}"
    )]
    UnequalSigmas { sigma1: f64, sigma2: f64 },

    /// A rejection sampler hit its proposal cap. With the default
    /// tolerances this indicates parameters in a regime where the
    /// acceptance probability underflows.
    #[error("rejection sampler exceeded {0} proposals without accepting")]
    RejectionCap(u64),

    /// Preset name outside the known set.
    #[error("unknown preset '{0}' (expected fig1, fig2, or fig3)")]
    UnknownPreset(String),

    /// Sample file did not match the expected schema.
    #[error("malformed sample file: {0}")]
    SampleFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}
