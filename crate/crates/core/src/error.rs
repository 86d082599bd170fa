use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("reservoir unstable at k = {k:.9} (radicand {radicand:e})")]
    Unstable { k: f64, radicand: f64 },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("dispersion extremum at root k = {k}: |dε/dk| = {slope:e}")]
    ExtremumSingularity { k: f64, slope: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("state is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("mean spin vanishes (|<J>| = {0:e}), squeezing direction undefined")]
    UndefinedDirection(f64),

    #[error("t·Δ(t) − π/2 has no sign change on [{t_min}, {t_max}]")]
    NoOptimalTime { t_min: f64, t_max: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Configuration problems (as opposed to numerical failures).
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidParameter(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
