use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no sign change of the shooting residual in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("bracket search failed after {doublings} doublings (last endpoint {last})")]
    BracketSearch { doublings: usize, last: f64 },

    #[error("ODE integration failed at r = {at}: {reason}")]
    Integration { at: f64, reason: String },

    #[error("eigensolver failed: {0}")]
    Solver(String),

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("eigenfunction profile is not monotone at grid index {index} (beta = {beta})")]
    NonMonotone { index: usize, beta: f64 },

    #[error("curve resolution insufficient: Gauss-Bonnet residual {residual:e} exceeds {tolerance:e}")]
    RefinementNeeded { residual: f64, tolerance: f64 },

    #[error("focal singularity: 1 - kappa*tanh(t) = {denominator} (kappa = {kappa}, t = {t})")]
    Focal { kappa: f64, t: f64, denominator: f64 },

    #[error("domain is not horospherically convex (kappa_min = {kappa_min})")]
    NotHConvex { kappa_min: f64 },

    #[error("theorem hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("point is not on the hyperboloid: -<p,q> = {0}")]
    InvalidPoint(f64),

    #[error("invalid family parameters: radius {radius} at theta = {theta}")]
    InvalidFamily { theta: f64, radius: f64 },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("meshing error: {0}")]
    Mesh(String),

    #[error("config error in field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True when the input lies outside a theorem's hypotheses rather than
    /// a computation having failed.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::NotHConvex { .. } | Error::Hypothesis(_) | Error::InvalidFamily { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
