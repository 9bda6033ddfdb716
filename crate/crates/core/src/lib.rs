//! Multi-constraint graph partitioning with knapsack capacity bounds.

// `!(x > 0.0)` style checks deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod driver;
pub mod error;
pub mod graph;
pub mod par;
pub mod refine;
pub mod relax;
pub mod rounding;
pub mod solver;

pub use error::{Error, Result};
