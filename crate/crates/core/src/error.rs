use crate::C64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {dim} exceeds the configured limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },

    /// QR iteration ran out of its sweep budget. `partial` holds the
    /// eigenvalues that had already deflated.
    #[error("QR iteration did not converge after {iterations} sweeps ({} of {dim} eigenvalues found)", partial.len())]
    NoConvergence {
        iterations: usize,
        dim: usize,
        partial: Vec<C64>,
    },

    #[error("normal-mode spectrum is unstable (mode {mode} has real μ = {mu} ≤ 0)")]
    Unstable { mode: usize, mu: f64 },

    #[error("mode {mode} (μ = {mu}) has no conjugate partner within {tol:e}")]
    PairingFailed { mode: usize, mu: C64, tol: f64 },

    #[error("level {level}: {detail}")]
    ClassificationMismatch { level: String, detail: String },

    #[error("unperturbed level {level} is degenerate; use degenerate first-order analysis")]
    DegenerateLevel { level: String },

    #[error("level {level} lies within {order} quanta of the cutoff {cutoff}")]
    LevelNearCutoff {
        level: String,
        order: usize,
        cutoff: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("group closure exceeded {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("unknown scan axis '{0}'")]
    InvalidAxis(String),

    #[error("both ends of the bracket have label {0}")]
    NoSignChange(String),
}
