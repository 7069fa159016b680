use thiserror::Error;

use crate::quiver::DimVector;

/// Every failure the library can report.
///
/// Variants fall in two groups: invalid input (bad files, unsupported
/// parameters, size limits) and internal assertion failures, where a
/// computed quantity violated an invariant the theory guarantees. The CLI
/// maps the first group to exit code 1 and the second to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("dimension vector has {found} entries, quiver has {expected} vertices")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("vertex {0} carries a loop and has no reflection")]
    LoopVertex(usize),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("odd cohomological degree at {0}; only even degrees are supported")]
    OddDegree(DimVector),

    #[error("block {dim} exceeds the capacity cap ({size} > {cap})")]
    Capacity { dim: DimVector, size: usize, cap: usize },

    #[error("not enough prime powers to interpolate degree {degree} at {dim}: have {available}")]
    InsufficientFields {
        dim: DimVector,
        degree: usize,
        available: usize,
    },

    #[error("Kac input missing at {0}")]
    MissingInput(DimVector),

    #[error("{dim} is not a primitive positive root")]
    NotPrimitive { dim: DimVector },

    #[error("assertion failed at {dim}: {detail}")]
    Assertion { dim: DimVector, detail: String },

    #[error("assertion failed: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn assertion(dim: &DimVector, detail: impl Into<String>) -> Self {
        Error::Assertion {
            dim: dim.clone(),
            detail: detail.into(),
        }
    }

    /// True for failures of a theoretical invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Assertion { .. } | Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
