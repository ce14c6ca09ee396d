use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {max_deviation:e})")]
    NotHermitian { max_deviation: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("channel is not trace preserving: ||sum K^dagger K - I|| = {residual:e}")]
    NotCptp { residual: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid alpha = {0}")]
    InvalidAlpha(f64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("(alpha, z) = ({alpha}, {z}) is outside the regimes where the measure is known to be well defined")]
    InvalidRegime { alpha: f64, z: f64 },

    #[error("parameter {value} out of range [{min}, {max}] for {kind}")]
    ParamOutOfRange {
        kind: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("channel {0} requires a parameter")]
    MissingParam(&'static str),

    #[error("problem too large for exhaustive search: {0}")]
    DimensionTooLarge(String),
}

pub type Result<T> = core::result::Result<T, Error>;
