//! Coupled colored TASEP, oriented swap process and exponential last-passage
//! percolation, with exact staircase-tableau / sorting-network combinatorics
//! and the statistics needed to compare their laws.

pub mod clockfield;
pub mod egcomb;
mod engine;
pub mod error;
pub mod lpp;
pub mod osp;
pub mod par;
pub mod sim;
pub mod sixvertex;
pub mod stats;
pub mod suites;
pub mod tasep;

pub use engine::{SwapEvent, HOLE};
pub use error::{Error, Result};
