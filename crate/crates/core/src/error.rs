use thiserror::Error;

/// Errors raised by the moment and hypergeometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The Dirichlet density is unbounded at the requested point.
    #[error("density has a pole: {0}")]
    Pole(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("accuracy target not met: best estimate {estimate:e} with error estimate {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("strategy `{strategy}` unavailable: {reason}")]
    StrategyUnavailable {
        strategy: &'static str,
        reason: String,
    },

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    #[error("series did not converge by order {order}: partial sum {partial:e}")]
    NonConvergence { partial: f64, order: u32 },

    #[error("parameter error: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
