//! Exact rational scalars, vectors and matrices.

pub mod matrix;
pub mod rational;
pub mod vector;

pub use matrix::{affine_dim, independent_subset, rank_of, solve_affine, Matrix};
pub use rational::{format_rational, frac, int, parse_rational, to_f64, Rational};
pub use vector::Vector;
