use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::ConvexUnitCurve;
use crate::error::{Error, Result};
use crate::geometry::{CoverParams, HalfPlane, Hexagon, Point};

pub const CONTAIN_TOL: f64 = 1e-9;
const REFINE_CANDIDATES: usize = 8;
const GOLDEN_ITERS: usize = 90;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    /// Rotation in radians, applied after the reflection.
    pub angle: f64,
    pub flip_x: bool,
    pub flip_y: bool,
    pub translation: Point,
    /// Least distance from a vertex to the boundary; negative when some
    /// vertex sticks out.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlaceOutcome {
    Placed(Placement),
    /// The best pose found, which leaves the cover.
    Failed(Placement),
}

impl PlaceOutcome {
    pub fn is_placed(&self) -> bool {
        matches!(self, PlaceOutcome::Placed(_))
    }
}

/// Largest `delta` with every vertex at distance `>= delta` inside the
/// cover after the best translation. Vertex enumeration of a 3-variable LP.
fn best_translation(halfplanes: &[HalfPlane], pts: &[Point]) -> (f64, Point) {
    let k = halfplanes.len();
    let rhs: Vec<f64> = halfplanes
        .iter()
        .map(|h| h.offset - pts.iter().map(|&p| h.normal.dot(p)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let mut best = (f64::NEG_INFINITY, Point::default());
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let Some((d, delta)) = solve3([a, b, c].map(|i| (halfplanes[i].normal, rhs[i]))) else {
                    continue;
                };
                if delta <= best.0 {
                    continue;
                }
                let ok = (0..k).all(|i| halfplanes[i].normal.dot(d) + delta <= rhs[i] + 1e-12);
                if ok {
                    best = (delta, d);
                }
            }
        }
    }
    best
}

/// Solves `n_i . d + delta = r_i` for three rows.
fn solve3(rows: [(Point, f64); 3]) -> Option<(Point, f64)> {
    let [(n0, r0), (n1, r1), (n2, r2)] = rows;
    // subtract the first row to eliminate delta
    let (a, ra) = (n1 - n0, r1 - r0);
    let (b, rb) = (n2 - n0, r2 - r0);
    let det = a.cross(b);
    if det.abs() < 1e-12 {
        return None;
    }
    let d = Point::new((ra * b.y - rb * a.y) / det, (a.x * rb - b.x * ra) / det);
    Some((d, r0 - n0.dot(d)))
}

fn pose(hex: &Hexagon, curve: &ConvexUnitCurve, angle: f64, flip_x: bool, flip_y: bool) -> Placement {
    let pts = curve.transformed(angle, flip_x, flip_y);
    let (margin, translation) = best_translation(&hex.halfplanes, &pts);
    Placement { angle, flip_x, flip_y, translation, margin }
}

/// Whether every vertex of the posed curve lies in `hex` within `tol`.
pub fn verify_placement(hex: &Hexagon, curve: &ConvexUnitCurve, pl: &Placement, tol: f64) -> bool {
    curve
        .transformed(pl.angle, pl.flip_x, pl.flip_y)
        .iter()
        .all(|&v| hex.contains(v + pl.translation, tol))
}

/// Searches rotations on a uniform grid, the four reflections and all
/// translations for a pose inside the cover; near-misses are refined by a
/// golden-section search on the angle.
pub fn sample_and_place(curve: &ConvexUnitCurve, params: &CoverParams, angle_steps: usize) -> Result<PlaceOutcome> {
    if angle_steps < 360 {
        return Err(Error::InvalidOptions("angle_steps must be at least 360".into()));
    }
    let hex = params.hexagon();
    let step = std::f64::consts::TAU / angle_steps as f64;
    let flips = [(false, false), (true, false), (false, true), (true, true)];
    let mut poses = Vec::with_capacity(angle_steps * 4);
    for i in 0..angle_steps {
        for &(fx, fy) in &flips {
            let pl = pose(&hex, curve, i as f64 * step, fx, fy);
            if pl.margin >= -CONTAIN_TOL && verify_placement(&hex, curve, &pl, CONTAIN_TOL) {
                return Ok(PlaceOutcome::Placed(pl));
            }
            poses.push(pl);
        }
    }
    poses.sort_by(|a, b| b.margin.total_cmp(&a.margin));
    let mut best = poses[0];
    for start in poses.iter().take(REFINE_CANDIDATES) {
        let pl = refine(&hex, curve, start, step);
        if pl.margin >= -CONTAIN_TOL && verify_placement(&hex, curve, &pl, CONTAIN_TOL) {
            return Ok(PlaceOutcome::Placed(pl));
        }
        if pl.margin > best.margin {
            best = pl;
        }
    }
    Ok(PlaceOutcome::Failed(best))
}

fn refine(hex: &Hexagon, curve: &ConvexUnitCurve, start: &Placement, step: f64) -> Placement {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |a: f64| pose(hex, curve, a, start.flip_x, start.flip_y);
    let (mut lo, mut hi) = (start.angle - step, start.angle + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = if f1.margin > f2.margin { f1 } else { f2 };
    if start.margin > best.margin {
        best = *start;
    }
    for _ in 0..GOLDEN_ITERS {
        if f1.margin > f2.margin {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        for c in [f1, f2] {
            if c.margin > best.margin {
                best = c;
            }
        }
    }
    best
}

/// Everything needed to reproduce a failed placement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureDump {
    pub seed: u64,
    pub trial: u64,
    pub curve: ConvexUnitCurve,
    pub params: CoverParams,
    pub angle_steps: usize,
    pub best: Placement,
}

impl FailureDump {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("failure dumps serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub placed: u64,
    pub failures: Vec<FailureDump>,
}

/// Curve number `trial` of the seeded stream; vertex counts vary in 3..=40.
pub fn random_curve(seed: u64, trial: u64) -> ConvexUnitCurve {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let n = rng.random_range(3..=40);
    ConvexUnitCurve::random(&mut rng, n)
}

pub fn monte_carlo(params: &CoverParams, trials: u64, seed: u64, angle_steps: usize) -> Result<MonteCarloReport> {
    let outcomes: Vec<Result<Option<FailureDump>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let curve = random_curve(seed, trial);
            Ok(match sample_and_place(&curve, params, angle_steps)? {
                PlaceOutcome::Placed(_) => None,
                PlaceOutcome::Failed(best) => {
                    Some(FailureDump { seed, trial, curve, params: *params, angle_steps, best })
                }
            })
        })
        .collect();
    let mut failures = Vec::new();
    for o in outcomes {
        if let Some(f) = o? {
            failures.push(f);
        }
    }
    Ok(MonteCarloReport { trials, placed: trials - failures.len() as u64, failures })
}
