use thiserror::Error;

/// Errors raised by the analysis, simulation and tuning routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hurwitz (spectral abscissa {abscissa:e} >= 0)")]
    NotHurwitz { abscissa: f64 },

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("Kronecker system of the Lyapunov equation is singular")]
    SingularLyapunov,

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,

    #[error("matrix exponential overflowed")]
    ExpOverflow,

    #[error("plant evaluation refused: {0}")]
    PlantDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("region is infeasible (L = {l:e} >= 0)")]
    Infeasible { l: f64 },

    #[error("bisection could not bracket gamma (upper bound exceeded {0:e})")]
    BracketFailure(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
