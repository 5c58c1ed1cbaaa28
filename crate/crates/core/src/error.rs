use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix dimension {0} is not a power of two")]
    NonPowerOfTwoDim(usize),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not a density matrix: {reason}")]
    NotAState { reason: String },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("bloch vector norm {norm:.6} exceeds 1")]
    BlochNormExceedsOne { norm: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "threshold device saturated: removing {removed:.1} of {total:.1} counts leaves nothing"
    )]
    DeviceSaturated { removed: f64, total: f64 },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("partial transpose requires a two-qubit state, got {0} qubits")]
    NotTwoQubit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
