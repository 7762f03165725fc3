//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Model parameters violate one or more hypotheses.
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// The attenuation coefficient requires 0 <= sigma_plus < sigma_minus.
    #[error("kappa undefined: sigma_plus={sigma_plus} >= sigma_minus={sigma_minus}")]
    KappaUndefined { sigma_plus: f64, sigma_minus: f64 },

    /// Window index outside 1..=N.
    #[error("window index {n} out of range 1..={n_chain}")]
    WindowOutOfRange { n: usize, n_chain: usize },

    /// Evolution time outside the admissible interval.
    #[error("time {t} outside [0, {limit}]")]
    TimeOutOfRange { t: f64, limit: f64 },

    /// Vector or matrix dimension does not match the map / state dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Two maps with different attenuation coefficients cannot be composed.
    #[error("kappa mismatch in composition: left={left}, right={right}")]
    KappaMismatch { left: f64, right: f64 },

    /// Requested truncated Fock space exceeds the dense-matrix budget.
    #[error("Fock dimension {required} exceeds budget {budget} (cutoff^(N+1))")]
    DimensionBudgetExceeded { required: usize, budget: usize },

    /// Truncated Gibbs state would discard too much mass.
    #[error("Gibbs cutoff too small: discarded mass {discarded:.3e} > {limit:.3e} per mode")]
    GibbsTailMass { discarded: f64, limit: f64 },

    /// A state invariant was violated during or after integration.
    #[error(
        "invariant breach in {context}: trace drift {trace_drift:.3e}, \
         min eigenvalue {min_eigenvalue:.3e}, hermiticity drift {hermiticity_drift:.3e}"
    )]
    InvariantBreach {
        context: String,
        trace_drift: f64,
        min_eigenvalue: f64,
        hermiticity_drift: f64,
    },

    /// A state constructor received a matrix violating its invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Scenario config could not be parsed.
    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// Scenario config parsed but violates invariants; all violations listed.
    #[error("config validation failed:\n{}", .0.join("\n"))]
    ConfigInvalid(Vec<String>),

    /// A mode-specific config field is required but absent.
    #[error("missing field `{field}` (required for mode {mode})")]
    MissingField { field: &'static str, mode: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
