use crate::sdp::SolveStatus;

/// Errors raised anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |H - H^dag| = {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("eigensolver did not converge")]
    EigenNoConvergence,

    #[error("solver finished with status {status:?} (pres {pres:.2e}, dres {dres:.2e}, gap {gap:.2e})")]
    Solver {
        status: SolveStatus,
        pres: f64,
        dres: f64,
        gap: f64,
    },

    #[error("primal and dual values disagree: {primal} vs {dual}")]
    DualMismatch { primal: f64, dual: f64 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("size guard: {0}")]
    TooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
