use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("point or flat lies on the exceptional hyperplane and maps to infinity")]
    MapsToInfinity,

    #[error("hyperplane is vertical and has no graph form")]
    VerticalHyperplane,

    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),

    #[error("search limit reached: {0}")]
    SearchOverflow(String),

    #[error("runtime cap exceeded after {0:.1}s")]
    Deadline(f64),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        LabError::Parameter(msg.into())
    }

    pub(crate) fn mismatch(expected: impl ToString, got: impl ToString) -> Self {
        LabError::DimensionMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
