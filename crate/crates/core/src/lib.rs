// NaN-rejecting `!(a > b)` checks and index loops over parallel arrays are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod curve;
pub mod divisor;
pub mod edges;
pub mod le;
pub mod soliton;
