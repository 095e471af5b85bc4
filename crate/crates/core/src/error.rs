use thiserror::Error;

/// Errors raised anywhere in the phase engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("purity parameter r = {0} outside [0, 1]")]
    InvalidPurity(f64),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("operation requires a qubit, got dimension {0}")]
    NotQubit(usize),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("grid index {index} out of range (grid has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("evolution is not cyclic: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotCyclic { residual: f64, tolerance: f64 },

    #[error("nodal point: |Tr[rho(0) U(tau)]| = {magnitude:e} below tolerance {tolerance:e}")]
    NodalPoint { magnitude: f64, tolerance: f64 },

    #[error("evolution is not global cyclic: U(tau) is not a multiple of the identity")]
    NotGlobalCyclic,

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid angle: {0}")]
    InvalidAngle(String),

    #[error("state vector is not normalised (norm {0})")]
    NotNormalized(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
