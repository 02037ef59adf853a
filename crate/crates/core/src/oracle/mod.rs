//! Independent checks: a second minimizer, a grid bound, and a Monte-Carlo
//! containment test with random convex curves of length one.

mod curve;
mod minimize;
mod place;
pub mod qp;

pub use curve::{perimeter, ConvexUnitCurve};
pub use minimize::{grid_lower_sanity, project_feasible, subgradient_minimize, subgradient_search};
pub use place::{
    monte_carlo, random_curve, sample_and_place, verify_placement, FailureDump, MonteCarloReport, PlaceOutcome,
    Placement, CONTAIN_TOL,
};
