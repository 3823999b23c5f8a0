use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the function or model.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series, continued fraction or quadrature failed to reach tolerance.
    #[error("no convergence in {routine} after {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },
    /// A fully correlated (|coefficient| = 1) link was passed to a path
    /// that needs the inverse correlation structure.
    #[error("degenerate correlation: {0}")]
    DegenerateCorrelation(String),
    /// The legitimate link cannot beat the eavesdropper at any rate.
    #[error("secrecy infeasible: {0}")]
    SecrecyInfeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
