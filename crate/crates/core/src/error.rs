use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter window violated: {0}")]
    ParameterWindow(String),

    #[error("field does not live on this grid")]
    GridMismatch,

    #[error("unsupported harmonic sector ell = {0}")]
    UnsupportedSector(i64),

    #[error("no convergence after {iterations} iterations (last residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("fit unreliable: {0}")]
    FitUnreliable(String),

    #[error("input is not flagged radially decreasing")]
    NotRadiallyDecreasing,

    #[error(
        "Newton divergence at (alpha, p) = ({alpha:.6}, {p:.6}); last good point ({good_alpha:.6}, {good_p:.6})"
    )]
    NewtonDivergence {
        alpha: f64,
        p: f64,
        good_alpha: f64,
        good_p: f64,
    },

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
