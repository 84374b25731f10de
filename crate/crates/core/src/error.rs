use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("function `{id}` cannot be evaluated at t = {t} (derivative order {order})")]
    Domain { id: String, order: u8, t: f64 },

    #[error("derivative order {0} is not available (expected 0, 1 or 2)")]
    DerivativeOrder(u8),

    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("interval [{a}, {b}] leaves the safe domain of `{id}`")]
    OutsideSafeDomain { id: String, a: f64, b: f64 },

    #[error("point {x} is outside [{a}, {b}]")]
    PointOutsideInterval { x: f64, a: f64, b: f64 },

    #[error("quadrature tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("integrand is not finite at t = {t}")]
    NonFiniteIntegrand { t: f64 },

    #[error(
        "quadrature on [{a}, {b}] did not converge: error estimate {error_estimate:e} > tol {tol:e} after {subdivisions} panels"
    )]
    OracleNonConvergence {
        a: f64,
        b: f64,
        error_estimate: f64,
        tol: f64,
        subdivisions: usize,
    },

    #[error("envelope [{lower}, {upper}] does not contain the difference quotient {slope}")]
    EnvelopeInconsistent { lower: f64, upper: f64, slope: f64 },

    #[error("unknown function id `{id}`; valid ids: {valid}")]
    UnknownFunction { id: String, valid: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot write `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    /// True for errors caused by bad input rather than a numerical failure.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::UnknownFunction { .. }
                | Error::Config(_)
                | Error::InvalidInterval { .. }
                | Error::OutsideSafeDomain { .. }
                | Error::PointOutsideInterval { .. }
                | Error::InvalidTolerance(_)
        )
    }
}
