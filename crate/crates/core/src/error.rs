use thiserror::Error;

/// Errors produced by solvers, constructors, and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible weight: {0}")]
    InfeasibleWeight(String),

    /// The sign condition `∫ m |u|^p > 0` failed for a trial function.
    #[error("trial function outside the admissible cone: ∫ m |u|^p = {0} is not positive")]
    NonpositiveMass(f64),

    #[error("boundary trace term is undefined for Dirichlet conditions; enforce u(0)=u(1)=0 instead")]
    DirichletTrace,

    #[error("degenerate bathtub target: k = {k} of {n} cells would be positive")]
    DegenerateTarget { k: usize, n: usize },

    #[error("interval out of range: left = {left}, width = {width}")]
    IntervalOutOfRange { left: f64, width: f64 },

    #[error("function must vanish at both endpoints, got u(0) = {0}, u(1) = {1}")]
    NonVanishingEndpoints(f64, f64),

    /// The optimal-interval location under Robin conditions is an open
    /// problem; only Neumann and Dirichlet have a closed-form prediction.
    #[error("no predicted optimal interval for Robin conditions: the localization is an open problem")]
    RobinPredictionUnavailable,

    #[error("bracket [{lo}, {hi}] does not straddle the threshold")]
    BadBracket { lo: f64, hi: f64 },

    #[error("no feasible starting point: weight has no positive cell")]
    NoFeasibleStart,

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
