use thiserror::Error;

/// Errors raised by the coherence library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A requested size exceeds what the evaluator is configured for, or a
    /// truncation discards more weight than allowed.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// An integrand produced a non-finite value.
    #[error("non-finite integrand value {value} at node {node:?}")]
    NonFinite { node: Vec<f64>, value: f64 },

    /// A documented precondition on the input does not hold.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("matrix is not positive semi-definite (eigenvalue {0:e})")]
    Positivity(f64),

    #[error("unsupported state for this operation: {0}")]
    Unsupported(String),

    #[error("numeric integration did not converge: error estimate {estimate:e} exceeds {tolerance:e} (value {value})")]
    Convergence {
        value: f64,
        estimate: f64,
        tolerance: f64,
    },

    /// The χ-bin decomposition captures too little of the state's weight.
    #[error("coverage too low: bin weights sum to {sum}")]
    Coverage { sum: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
