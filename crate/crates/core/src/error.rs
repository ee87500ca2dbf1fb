use thiserror::Error;

/// Error type shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series did not converge: {0}")]
    NonConvergent(String),

    #[error("argument lies on the branch cut: {0}")]
    BranchCut(String),

    #[error("kernel evaluated at its singular point: {0}")]
    SingularPoint(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("grid resolution too coarse: {0}")]
    BadResolution(String),

    #[error("near-singular linear system (condition estimate {0:.3e}); the chosen |k| may sit at a discrete resonance of the truncated system")]
    NearSingular(f64),

    #[error("degenerate power-law fit: {0}")]
    DegenerateFit(String),

    #[error("k-grid too coarse for the generalized transform: {0}")]
    InsufficientBank(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("linear algebra backend failure: {0}")]
    Linalg(String),
}

pub type Result<T> = std::result::Result<T, Error>;
