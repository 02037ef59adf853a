//! Numerical certification that a clipped-rectangle hexagon covers every
//! closed curve of length one.
//!
//! Each case of the covering argument is a convex program: minimize the
//! perimeter of an octagon inscribed in the curve through its support
//! points in eight directions, subject to the affine conditions of the
//! case. [`certify::certify`] solves all of them and checks each lower
//! bound against a threshold.

pub mod catalog;
pub mod certify;
pub mod constraint;
pub mod error;
pub mod geometry;
mod num_serde;
pub mod oracle;
pub mod search;
pub mod solver;
pub mod support;
pub mod svg;

pub use error::{Error, Result};
pub use geometry::{area, CoverParams, Hexagon, Point};
pub use solver::{minimize_chain_length, SolveOptions, SolveResult, SolveStatus};
