use thiserror::Error;

/// Errors raised by state validation, the closed-form pipeline and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace {trace} differs from 1")]
    TraceNotUnit { trace: f64 },

    #[error("state has negative eigenvalue {eigenvalue:e}")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("{what} = {value} is outside {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid X-state: {0}")]
    InvalidXState(String),

    #[error("operation requires a canonical X-state (real, non-negative coherences)")]
    NotCanonical,

    #[error("matrix is not X-shaped (off-X entry of magnitude {magnitude:e})")]
    NotXShaped { magnitude: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
