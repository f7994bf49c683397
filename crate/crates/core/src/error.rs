use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GnumError {
    #[error("grid spacing mismatch: {0} vs {1}")]
    SpacingMismatch(f64, f64),

    #[error("invalid grid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid prime measure: node 0 carries mass {0}, expected 0")]
    InvalidPrimeMeasure(f64),

    #[error("measure is not normalized: node 0 carries mass {0}, expected 1")]
    NotNormalized(f64),

    #[error("measure is not invertible: node 0 carries zero mass")]
    NonInvertible,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid prime system: {}", .0.join("; "))]
    InvalidSystem(Vec<String>),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("unknown builtin system `{0}`")]
    UnknownBuiltin(String),

    #[error("element budget of {budget} generalized integers exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("s = {sigma}+{t}i lies outside the half-plane of convergence (sigma must exceed 1)")]
    DivergenceDomain { sigma: f64, t: f64 },

    #[error("invalid criterion spec: {0}")]
    InvalidSpec(String),
}

impl GnumError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            GnumError::BudgetExceeded { .. } | GnumError::DivergenceDomain { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, GnumError>;
