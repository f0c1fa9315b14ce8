use thiserror::Error;

use crate::lattice::Site;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not unitary: deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("dimension {dim} exceeds the dense assembly cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("state lives on a different domain than the operator")]
    DomainMismatch,

    #[error("eigensolver failed: {0}")]
    Solver(String),

    #[error("near-degenerate coin entry {value:.3e} at site {site:?}")]
    NearDegenerate { site: Site, value: f64 },

    #[error("operation requires a nonempty spectrum set")]
    EmptySet,

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::NotUnitary { .. }
            | Error::DimensionCap { .. }
            | Error::DomainMismatch
            | Error::Solver(_)
            | Error::NearDegenerate { .. }
            | Error::EmptySet => 2,
        }
    }
}
