use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: max |M - M^H| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPsd { eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("not an X-state: entry ({row}, {col}) has modulus {modulus:.3e}")]
    NotXState { row: usize, col: usize, modulus: f64 },

    #[error(
        "X-state pair {pair} has unequal populations {upper:.6e} and {lower:.6e}; \
         only the first pair may carry distinct populations"
    )]
    UnequalPairPopulations { pair: usize, upper: f64, lower: f64 },

    #[error(
        "X-state is not canonical: |z_{dominant}| = {dominant_abs:.6e} exceeds |z_1| = {z1_abs:.6e}; \
         canonicalize it first"
    )]
    NotCanonical { dominant: usize, dominant_abs: f64, z1_abs: f64 },

    #[error(
        "X-state cannot be canonicalized: pair {dominant} dominates but a1 = {a1:.6e} != b1 = {b1:.6e}"
    )]
    NotCanonicalizable { dominant: usize, a1: f64, b1: f64 },

    #[error("unsupported qubit count {n_qubits}: {reason}")]
    QubitCount { n_qubits: usize, reason: &'static str },

    #[error("index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: u64, n_qubits: usize },

    #[error("inconsistent measurement record: {0}")]
    InconsistentRecord(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed state file: {0}")]
    Json(#[from] serde_json::Error),
}
