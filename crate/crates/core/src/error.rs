use thiserror::Error;

/// Errors raised by the numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The multi-point coefficient condition `0 < Σ η_i ξ_i^(α+β-2) < Γ(α+β-1)` fails.
    #[error("hypothesis H1 violated: Σ η_i ξ_i^(α+β-2) = {sum} is not in (0, Γ(α+β-1) = {gamma_ab})")]
    HypothesisH1 { sum: f64, gamma_ab: f64 },

    /// A nonlinearity or coefficient produced a negative or non-finite value.
    #[error("{name} returned {value} at t = {t}, u = {u}, v = {v}; expected a finite nonnegative value")]
    InvalidValue {
        name: &'static str,
        t: f64,
        u: f64,
        v: f64,
        value: f64,
    },

    /// A half-line integral or an iteration appears not to converge.
    #[error("divergence detected: {0}")]
    Divergence(String),

    /// The requested path does not support this problem.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A dense linear system could not be solved.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
