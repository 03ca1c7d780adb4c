use thiserror::Error;

/// Errors raised by the simulation and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("operator does not commute with the symmetry (max deviation {0:e})")]
    SymmetryBroken(f64),

    #[error("eigensolver failed to converge on a {0}x{0} matrix")]
    NoConvergence(usize),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("clamp of {0:e} exceeds tolerance; upstream numerical fault")]
    ClampOverflow(f64),

    #[error("relative entropy diverges (p = {p}, q = {q})")]
    Divergence { p: f64, q: f64 },

    #[error("non-finite value in `{0}`")]
    NonFinite(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Short machine-readable category used by the CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) | Error::Json(_) => "config",
            Error::Io(_) => "io",
            _ => "numerical",
        }
    }

    /// Process exit status: 2 for configuration errors, 3 for numerical
    /// faults, 1 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => 2,
            "io" => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
