//! Minimum closed 8-chain length over a polyhedron, with a dual
//! certificate for the second-order cone form
//! `min sum u_i  s.t.  |p_{i+1} - p_i| <= u_i`, affine constraints.

mod barrier;
pub mod linalg;

use serde::{Deserialize, Serialize};

use crate::constraint::{ConstraintSystem, Relation, NVARS};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::support::SupportOctagon;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    /// Budget of Newton steps across both phases.
    pub max_iters: usize,
    /// Used by the oracle's smoothed polish; the barrier path ignores it.
    pub smoothing_schedule: Vec<f64>,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            gap_tol: 1e-6,
            feas_tol: 1e-9,
            max_iters: 2000,
            smoothing_schedule: (3..=9).map(|e| 10f64.powi(-e)).collect(),
            seed: 0,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0 && self.gap_tol.is_finite()) {
            return Err(Error::InvalidOptions("gap_tol must be positive".into()));
        }
        if !(self.feas_tol > 0.0 && self.feas_tol.is_finite()) {
            return Err(Error::InvalidOptions("feas_tol must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidOptions("max_iters must be at least 1".into()));
        }
        let s = &self.smoothing_schedule;
        if s.is_empty() || s.iter().any(|&e| !(e > 0.0)) || s.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidOptions(
                "smoothing schedule must be positive and strictly decreasing".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Certified,
    FeasibleNoCertificate,
    Infeasible,
    IterationLimit,
}

/// Dual information in the caller's constraint order. `constraints[j]` is
/// nonnegative for inequalities (whatever their direction) and free for
/// equalities; `edges[i]` is a subgradient of `|p_{i+1} - p_i|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub constraints: Vec<f64>,
    pub edges: [Point; 8],
}

impl Multipliers {
    pub fn zeros(n: usize) -> Self {
        Multipliers { constraints: vec![0.0; n], edges: [Point::default(); 8] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub primal_point: SupportOctagon,
    #[serde(with = "crate::num_serde")]
    pub primal_value: f64,
    #[serde(with = "crate::num_serde")]
    pub lower_bound: f64,
    #[serde(with = "crate::num_serde")]
    pub gap: f64,
    #[serde(with = "crate::num_serde")]
    pub feas_residual: f64,
    #[serde(with = "crate::num_serde")]
    pub kkt_residual: f64,
    pub multipliers: Multipliers,
    pub newton_steps: usize,
}

/// Solves one program. An empty feasible set is reported through
/// `status`, with both values `+inf`; only bad options are errors.
pub fn minimize_chain_length(sys: &ConstraintSystem, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;
    Ok(barrier::solve(sys, opts))
}

/// Edge `i` runs from p_{i+1} to p_{i+2} in 1-based labels.
pub(crate) fn edge_vector(z: &[f64; NVARS], i: usize) -> Point {
    let j = (i + 1) % 8;
    Point::new(z[2 * j] - z[2 * i], z[2 * j + 1] - z[2 * i + 1])
}

/// Largest violation among stationarity, complementary slackness, cone
/// conditions on the edge subgradients, multiplier signs and primal
/// feasibility.
pub fn check_kkt(sys: &ConstraintSystem, point: &SupportOctagon, mult: &Multipliers) -> f64 {
    if mult.constraints.len() != sys.len() {
        return f64::INFINITY;
    }
    let z = point.to_vector();
    let mut stat = [0.0; NVARS];
    let mut worst = 0.0f64;
    for i in 0..8 {
        let g = mult.edges[i];
        let j = (i + 1) % 8;
        stat[2 * j] += g.x;
        stat[2 * j + 1] += g.y;
        stat[2 * i] -= g.x;
        stat[2 * i + 1] -= g.y;
        let e = edge_vector(&z, i);
        worst = worst.max(g.norm() - 1.0);
        worst = worst.max(e.norm() - g.dot(e));
    }
    for (c, &mu) in sys.iter().zip(&mult.constraints) {
        let sign = match c.rel {
            Relation::Le => 1.0,
            Relation::Ge => -1.0,
            Relation::Eq => 1.0,
        };
        for (s, a) in stat.iter_mut().zip(&c.coeffs) {
            *s += sign * mu * a;
        }
        worst = worst.max(c.violation(&z));
        if c.rel != Relation::Eq {
            worst = worst.max(-mu);
            worst = worst.max((mu * c.slack(&z)).abs());
        }
    }
    let stationarity = stat.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    worst.max(stationarity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{xi, yi, Affine, Constraint, Tag};
    use crate::geometry::CoverParams;
    use crate::support::{support_constraints, touching_constraints};

    #[test]
    fn options_validation() {
        assert!(SolveOptions::default().validate().is_ok());
        let o = SolveOptions { gap_tol: 0.0, ..SolveOptions::default() };
        assert!(o.validate().is_err());
        let o = SolveOptions { smoothing_schedule: vec![1e-3, 1e-3], ..SolveOptions::default() };
        assert!(o.validate().is_err());
    }

    fn base(p: &CoverParams) -> ConstraintSystem {
        support_constraints(p.m).with(&touching_constraints(p.w))
    }

    #[test]
    fn analytic_base_multipliers() {
        let p = CoverParams::canonical();
        let sys = base(&p);
        let mut z = [0.0; NVARS];
        for k in [5, 6, 7] {
            z[yi(k)] = p.w;
        }
        z[yi(4)] = p.w / 2.0;
        z[yi(8)] = p.w / 2.0;
        let point = SupportOctagon::from_vector(&z);
        let mut mult = Multipliers::zeros(sys.len());
        let down = Point::new(0.0, -1.0);
        let up = Point::new(0.0, 1.0);
        // edge i joins p_{i+1} and p_{i+2}
        mult.edges = [down, up, up, up, up, down, down, down];
        let n = sys.len();
        mult.constraints[n - 2] = 2.0;
        mult.constraints[n - 1] = -2.0;
        let r = check_kkt(&sys, &point, &mult);
        assert!(r <= 1e-12, "residual {r}");
    }

    #[test]
    fn non_optimal_point_has_large_residual() {
        let p = CoverParams::canonical();
        let sys = base(&p);
        let mut z = [0.0; NVARS];
        for k in 1..=8 {
            let a = (-135.0 + 45.0 * (k as f64 - 1.0)).to_radians();
            z[xi(k)] = 0.15 + 0.15 * a.cos();
            z[yi(k)] = p.w / 2.0 + p.w / 2.0 * a.sin();
        }
        let mut mult = Multipliers::zeros(sys.len());
        for i in 0..8 {
            let e = edge_vector(&z, i);
            mult.edges[i] = e * (1.0 / e.norm());
        }
        assert!(check_kkt(&sys, &SupportOctagon::from_vector(&z), &mult) > 1e-3);
    }

    #[test]
    fn single_fixed_edge() {
        let sys: ConstraintSystem = [
            Constraint::eq(Affine::x(1), Affine::constant(0.0), Tag::Placement),
            Constraint::eq(Affine::y(1), Affine::constant(0.0), Tag::Placement),
            Constraint::eq(Affine::x(2), Affine::constant(3.0), Tag::Placement),
            Constraint::eq(Affine::y(2), Affine::constant(4.0), Tag::Placement),
        ]
        .into_iter()
        .collect();
        let r = minimize_chain_length(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Certified);
        assert!((r.primal_value - 10.0).abs() < 1e-6, "{}", r.primal_value);
        assert!(r.gap <= 1e-6);
    }

    #[test]
    fn infeasible_system() {
        let sys: ConstraintSystem = [
            Constraint::ge(Affine::x(1), Affine::constant(1.0), Tag::Placement),
            Constraint::le(Affine::x(1), Affine::constant(0.0), Tag::Placement),
        ]
        .into_iter()
        .collect();
        let r = minimize_chain_length(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert_eq!(r.lower_bound, f64::INFINITY);
    }
}
