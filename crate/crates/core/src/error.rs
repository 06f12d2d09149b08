use thiserror::Error;

/// Everything that can go wrong inside the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit index {index} out of range for a {n}-qubit register")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("positivity violation: eigenvalue {0:.3e}")]
    PositivityViolation(f64),

    #[error("trace drift {drift:.3e} at t = {t} exceeds budget (reduce dt)")]
    TraceDrift { drift: f64, t: f64 },

    #[error("insufficient kernel history: requested t = {requested}, covered up to {covered}")]
    InsufficientHistory { requested: f64, covered: f64 },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("inconsistent syndrome for error {error}: {reason}")]
    InconsistentSyndrome { error: String, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
