use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),

    #[error("site index {index} out of range 1..={len}")]
    SiteOutOfRange { index: usize, len: usize },

    #[error("tridiagonal eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("matrix dimension {dim} exceeds the limit of {max} for {what}")]
    DimensionTooLarge {
        what: &'static str,
        dim: usize,
        max: usize,
    },

    #[error("numerical consistency check failed: {0}")]
    Numerical(String),

    #[error("level cluster assignment is ambiguous (coupling too strong for the weak-coupling picture): {0}")]
    AmbiguousClusters(String),

    #[error("no perturbatively-perfect transfer predicted for n_s={n_s}, n_w={n_w}")]
    NoTransferPredicted { n_s: usize, n_w: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the command-line tool: 2 for bad
    /// configuration or input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence(_)
            | Error::Numerical(_)
            | Error::AmbiguousClusters(_)
            | Error::NoTransferPredicted { .. } => 3,
            _ => 2,
        }
    }
}
