use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The generating-function argument is at or beyond the convergence radius.
    #[error("outside convergence radius: z = {z} but radius is {radius}")]
    OutsideRadius { z: f64, radius: f64 },

    #[error("series diverges: z = {z}, z * rho = {ratio}")]
    Divergent { z: f64, ratio: f64 },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("bush-cap exceeded: a bush has more than {cap} vertices (re-run with a larger cap)")]
    BushCapExceeded { cap: usize },

    #[error("extinction probability is 1: no infinite backbone")]
    NoBackbone,

    #[error("extinction probability is 0: the tree has no bushes")]
    NoBushes,

    #[error("unsupported state pair ({x}, {y}) for N = {n}")]
    UnsupportedPair { n: usize, x: usize, y: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for bad input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidDistribution(_) | Error::Config(_) | Error::Io(_) | Error::Json(_) => 2,
            _ => 3,
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
