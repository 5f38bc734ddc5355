use thiserror::Error;

/// Errors produced by every layer of the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("generator is not Hermitian (max deviation {deviation:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("state is not normalized: |norm - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A spin-system parameter violates one of the model's inequalities.
    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    /// No pulse satisfies a selectivity bound. `bound` names the violated condition.
    #[error("infeasible pulse ({bound}): {detail}")]
    Feasibility { bound: String, detail: String },

    #[error("gate `{gate}` cannot be compiled to a pulse: {reason}")]
    Compilation { gate: String, reason: String },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, actual: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
