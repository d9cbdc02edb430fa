//! Exact decision procedures for polyhedral Banach spaces: norm
//! parallelism, triangle equality attainment (TEA), and certification of
//! linear operators that preserve these relations.

pub mod catalog;
pub mod dd;
pub mod error;
pub mod exact;
pub mod face;
pub mod io;
pub mod pairs;
pub mod preserve;
pub mod sampling;
pub mod search;
pub mod space;
pub mod suites;
pub mod sums;

pub use error::{Error, Result};
pub use exact::{Matrix, Rational, Vector};
pub use face::Face;
pub use pairs::{PairKind, PairVerdict};
pub use preserve::{Operator, PreservationReport};
pub use space::{PolyhedralSpace, SignedDual, SupportSet};
