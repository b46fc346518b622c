use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{name} must lie in [0, 1], got {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("matrix is not Hermitian: max |A - A\u{2020}| = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("matrix trace must be 1, got {trace}")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("state vector is not normalized: \u{03a3}|a_i|\u{00b2} = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("Kraus operators violate completeness: max |\u{03a3}E\u{2020}E - I| = {defect:.3e}")]
    IncompleteKraus { defect: f64 },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate targets and controls must be distinct qubits")]
    OverlappingQubits,

    #[error("circuit kind {kind} requires angle {angle}, which was not provided")]
    MissingAngle {
        kind: &'static str,
        angle: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
