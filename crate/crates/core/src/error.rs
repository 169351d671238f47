use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Raised when the initial or the stationary state is (numerically) pure,
    /// where the relative entropy and its time derivative blow up.
    #[error("divergent entropy: {0}")]
    DivergentEntropy(String),

    #[error("propagation failed at tau={tau}: {reason}")]
    Propagation { tau: f64, reason: String },

    #[error("quadrature not converged: {0}")]
    Quadrature(String),

    #[error("solver diagnostic failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
