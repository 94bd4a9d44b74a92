use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("empty set of subsystems to keep")]
    EmptyKeep,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("cannot combine a state vector with a density matrix")]
    MixedKinds,
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },
    #[error("system entropy {entropy:e} bits is below the minimum; no pointer basis is defined")]
    NoPointerBasis { entropy: f64 },
    #[error("fraction dimension {0} exceeds a single qubit; use holevo_chi instead")]
    FractionTooLarge(usize),
    #[error("brute-force redundancy oracle limited to n <= 6 environment qubits (got {0})")]
    OracleTooLarge(usize),
    #[error("redundancy is undefined at every time of the trajectory")]
    AllUndefined,
    #[error("invalid sweep specification at `{path}`: {reason}")]
    Spec { path: String, reason: String },
    #[error("unknown figure tag `{0}`")]
    UnknownFigure(String),
    #[error("table format: {0}")]
    Table(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn spec(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Spec {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
