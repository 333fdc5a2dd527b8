use thiserror::Error;

/// Errors raised by the graph, counting and walk routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters or inputs violate a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// An index or spectral label is outside its admissible range.
    #[error("out of range: {0}")]
    Range(String),

    /// The operation is undefined for this input (e.g. `t = 0`, a disconnected graph).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested object is too large to materialize under the active cap.
    #[error("size limit exceeded: {what} is {actual}, cap is {cap}")]
    Size {
        what: &'static str,
        actual: String,
        cap: u64,
    },

    /// The computation would exceed the configured work horizon.
    #[error("infeasible: {message} (estimated cost ~{estimated_cost:.3e})")]
    Feasibility {
        message: String,
        estimated_cost: f64,
    },

    /// A ratio whose denominator vanishes.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    /// The second absolute eigenvalue equals the degree, so no spectral gap exists.
    #[error("no spectral gap: |lambda| = {lambda_abs} >= degree {degree}")]
    NoSpectralGap { lambda_abs: String, degree: String },

    /// Internal cross-check failed; indicates a bug rather than bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
