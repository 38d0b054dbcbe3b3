//! Exact rational linear algebra and real-root isolation.
//!
//! Everything combinatorial in the crate (weights, RREF entries, minors, edge
//! vectors) lives in [`Rational`]; floating point only enters where
//! exponentials force it.

mod matrix;
mod poly;
mod rational;

pub use matrix::RationalMatrix;
pub use poly::{real_roots, real_roots_with, QPoly, RealPoly, RootOptions};
pub use rational::{format_rational, parse_rational, rational_to_f64, serialize_rational, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("column subset {subset:?} is not a {k}-subset of [1, {n}]")]
    BadSubset { subset: Vec<usize>, k: usize, n: usize },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
