use thiserror::Error;

use crate::exact::Vector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dual vertices do not span the space; the norm would vanish on a nonzero vector")]
    DegenerateNorm,

    #[error("functional ({0}) is not a vertex of the dual unit ball")]
    RedundantFunctional(Vector),

    #[error("primal vertices supplied for cross-validation do not match the derived ones")]
    PrimalMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation is undefined at the zero vector")]
    ZeroVector,

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("point is not in the relative interior of the face")]
    NotInteriorPoint,

    #[error("unknown functional: not a signed dual vertex of the space")]
    UnknownFunctional,

    #[error("epsilon must lie in [0, 1), got {0}")]
    InvalidEpsilon(String),

    #[error("p must be a finite real number greater than 1, got {0}")]
    InvalidP(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("operator is not bijective")]
    NotBijective,

    #[error("operator does not preserve parallel pairs")]
    NotPreserver,

    #[error("image of a smooth facet point is not smooth: support set has {0} functionals")]
    MappingAmbiguous(usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("unsupported dimension {0}: only 2-dimensional spaces can be plotted")]
    UnsupportedDimension(usize),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown space: {0}")]
    UnknownSpace(String),

    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            position: err.column(),
            message: format!("line {}: {}", err.line(), err),
        }
    }
}
