use thiserror::Error;

/// Errors raised anywhere in the walk, analysis, or experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coin vector is not normalized: |c|^2 = {norm_sqr:.3e}")]
    NotNormalized { norm_sqr: f64 },

    #[error("coin vector has {got} components, expected {expected}")]
    CoinDimension { got: usize, expected: usize },

    #[error("origin {origin:?} lies outside a lattice of half width {half_width}")]
    OriginOutsideLattice { origin: Vec<i64>, half_width: usize },

    #[error("amplitude reached the lattice edge at step {step}; lattice half width {half_width} is too small")]
    BoundaryOverflow { step: usize, half_width: usize },

    #[error("phase landscape has {got} values, walk needs {expected}")]
    LandscapeSize { got: usize, expected: usize },

    #[error("state norm {norm:.12} deviates from 1 by more than {tolerance:e}")]
    StateNotNormalized { norm: f64, tolerance: f64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("singular input: {0}")]
    Singular(String),

    #[error(
        "lyapunov estimate did not converge: first half {first:.6e}, second half {second:.6e}"
    )]
    NotConverged { first: f64, second: f64 },

    #[error("realization {index}: {source}")]
    Realization {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for problems with user supplied configuration rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
