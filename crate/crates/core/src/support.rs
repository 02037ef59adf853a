//! Support points of a convex closed curve in eight fixed directions and
//! the affine conditions that place them in the cover's clipped corners.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constraint::{Affine, Constraint, ConstraintSystem, Relation, Tag, NVARS};
use crate::error::{Error, Result};
use crate::geometry::{Corner, CoverParams, Point};

/// p1..p8: lower-left, bottom, lower-right, right, upper-right, top,
/// upper-left and left support points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SupportOctagon {
    pub points: [Point; 8],
}

impl SupportOctagon {
    pub fn from_vector(z: &[f64; NVARS]) -> Self {
        let mut points = [Point::default(); 8];
        for (k, p) in points.iter_mut().enumerate() {
            *p = Point::new(z[2 * k], z[2 * k + 1]);
        }
        SupportOctagon { points }
    }

    pub fn to_vector(&self) -> [f64; NVARS] {
        let mut z = [0.0; NVARS];
        for (k, p) in self.points.iter().enumerate() {
            z[2 * k] = p.x;
            z[2 * k + 1] = p.y;
        }
        z
    }

    /// 1-based access.
    pub fn p(&self, k: usize) -> Point {
        self.points[k - 1]
    }

    pub fn chain_length(&self) -> f64 {
        chain_length(&self.to_vector())
    }
}

/// Closed 8-chain length `sum |p_{i+1} - p_i|`.
pub fn chain_length(z: &[f64; NVARS]) -> f64 {
    (0..8)
        .map(|i| {
            let j = (i + 1) % 8;
            (z[2 * j] - z[2 * i]).hypot(z[2 * j + 1] - z[2 * i + 1])
        })
        .sum()
}

/// Gradient of the chain length; degenerate edges contribute zero.
pub fn chain_gradient(z: &[f64; NVARS]) -> [f64; NVARS] {
    let mut g = [0.0; NVARS];
    for i in 0..8 {
        let j = (i + 1) % 8;
        let dx = z[2 * j] - z[2 * i];
        let dy = z[2 * j + 1] - z[2 * i + 1];
        let n = dx.hypot(dy);
        if n > 0.0 {
            g[2 * j] += dx / n;
            g[2 * j + 1] += dy / n;
            g[2 * i] -= dx / n;
            g[2 * i + 1] -= dy / n;
        }
    }
    g
}

/// Support functional of point `k`: (coefficient on x, whether p_k
/// minimizes it).
fn support_direction(k: usize, m: f64) -> (f64, f64, bool) {
    match k {
        1 => (m, 1.0, true),
        2 => (0.0, 1.0, true),
        3 => (-m, 1.0, true),
        4 => (1.0, 0.0, false),
        5 => (m, 1.0, false),
        6 => (0.0, 1.0, false),
        7 => (-m, 1.0, false),
        8 => (1.0, 0.0, true),
        _ => unreachable!("support points are numbered 1..=8"),
    }
}

/// p_k is extreme among all eight points for its direction.
pub fn support_constraints(m: f64) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new();
    for k in 1..=8 {
        let (a, b, minimizes) = support_direction(k, m);
        let f = |j: usize| Affine::x(j) * a + Affine::y(j) * b;
        for j in (1..=8).filter(|&j| j != k) {
            let rel = if minimizes { Relation::Ge } else { Relation::Le };
            sys.push(Constraint::new(f(j), rel, f(k), Tag::Support));
        }
    }
    sys
}

/// The curve touches the bottom and top walls.
pub fn touching_constraints(w: f64) -> ConstraintSystem {
    [
        Constraint::eq(Affine::y(2), Affine::zero(), Tag::Touching),
        Constraint::eq(Affine::y(6), Affine::constant(w), Tag::Touching),
    ]
    .into_iter()
    .collect()
}

/// `x4 - x8 <= l`.
pub fn box_width_constraint(l: f64) -> Constraint {
    Constraint::le(Affine::x(4) - Affine::x(8), Affine::constant(l), Tag::BoxWidth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalTranslation {
    R5,
    R3,
    L7,
}

/// Box position putting the named point on a small-clip cut line.
pub fn critical_translation(which: CriticalTranslation, p: &CoverParams) -> Affine {
    let (w, t2, m) = (p.w, p.t2, p.m);
    match which {
        CriticalTranslation::R5 => Affine::x(5) - (Affine::constant(w - t2) - Affine::y(5)) * (1.0 / m),
        CriticalTranslation::R3 => Affine::x(3) + (Affine::constant(t2) - Affine::y(3)) * (1.0 / m),
        CriticalTranslation::L7 => Affine::x(7) + (Affine::constant(w - t2) - Affine::y(7)) * (1.0 / m),
    }
}

/// Horizontal position of the box `[x_L, x_L + l]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Placement {
    /// `x_L = x8`.
    Left,
    /// `x_R = x4`.
    Right,
    /// `x_R = x_R5`.
    R5,
    /// `x_R = x_R3`.
    R3,
    /// `x_L = x_L7`.
    L7,
}

impl Placement {
    pub fn left_wall(self, p: &CoverParams) -> Affine {
        match self {
            Placement::Left => Affine::x(8),
            Placement::L7 => critical_translation(CriticalTranslation::L7, p),
            _ => self.right_wall(p) - p.l,
        }
    }

    pub fn right_wall(self, p: &CoverParams) -> Affine {
        match self {
            Placement::Right => Affine::x(4),
            Placement::R5 => critical_translation(CriticalTranslation::R5, p),
            Placement::R3 => critical_translation(CriticalTranslation::R3, p),
            _ => self.left_wall(p) + p.l,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Placement::Left => "L",
            Placement::Right => "R",
            Placement::R5 => "@xR5",
            Placement::R3 => "@xR3",
            Placement::L7 => "@xL7",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClipSize {
    Big,
    Small,
}

/// "p_k lies in the big (OUT) or small (out) clipped corner when the box
/// sits at `placement`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerPredicate {
    pub point: usize,
    pub corner: Corner,
    pub size: ClipSize,
    pub placement: Placement,
}

impl CornerPredicate {
    pub fn new(point: usize, corner: Corner, size: ClipSize, placement: Placement) -> Result<Self> {
        let expected = match point {
            1 => Corner::LowerLeft,
            3 => Corner::LowerRight,
            5 => Corner::UpperRight,
            7 => Corner::UpperLeft,
            _ => {
                return Err(Error::InvalidPredicate(format!(
                    "p{point} never lies in a clipped corner"
                )))
            }
        };
        if corner != expected {
            return Err(Error::InvalidPredicate(format!(
                "p{point} pairs only with the {} corner, not {}",
                expected.abbrev(),
                corner.abbrev()
            )));
        }
        Ok(CornerPredicate { point, corner, size, placement })
    }

    /// OUT predicate for p_k in its own corner.
    pub fn big(point: usize, placement: Placement) -> Self {
        Self::with_own_corner(point, ClipSize::Big, placement)
    }

    /// out predicate for p_k in its own corner.
    pub fn small(point: usize, placement: Placement) -> Self {
        Self::with_own_corner(point, ClipSize::Small, placement)
    }

    fn with_own_corner(point: usize, size: ClipSize, placement: Placement) -> Self {
        let corner = match point {
            1 => Corner::LowerLeft,
            3 => Corner::LowerRight,
            5 => Corner::UpperRight,
            7 => Corner::UpperLeft,
            _ => panic!("p{point} has no clipped corner"),
        };
        CornerPredicate { point, corner, size, placement }
    }

    pub fn inequality(&self, p: &CoverParams) -> Constraint {
        corner_inequality(self, p)
    }
}

impl fmt::Display for CornerPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.size {
            ClipSize::Big => "OUT",
            ClipSize::Small => "out",
        };
        match self.placement {
            Placement::Left | Placement::Right => {
                write!(f, "{head}{}{}", self.placement.label(), self.point)
            }
            other => write!(f, "{head}{}{}", self.point, other.label()),
        }
    }
}

/// The cut-line side condition putting p_k inside the clipped triangle.
pub fn corner_inequality(pred: &CornerPredicate, p: &CoverParams) -> Constraint {
    let (w, m) = (p.w, p.m);
    let leg = match pred.size {
        ClipSize::Big => p.t,
        ClipSize::Small => p.t2,
    };
    let k = pred.point;
    let up = Affine::y(k) + Affine::x(k) * m;
    let down = Affine::y(k) - Affine::x(k) * m;
    let xr = pred.placement.right_wall(p);
    let xl = pred.placement.left_wall(p);
    match pred.corner {
        Corner::UpperRight => Constraint::ge(up, xr * m + (w - leg), Tag::Corner),
        Corner::LowerRight => Constraint::le(down, -(xr * m) + leg, Tag::Corner),
        Corner::UpperLeft => Constraint::ge(down, -(xl * m) + (w - leg), Tag::Corner),
        Corner::LowerLeft => Constraint::le(up, xl * m + leg, Tag::Corner),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxRelation {
    Fits,
    LeavesLeft,
    LeavesRight,
}

impl BoxRelation {
    pub fn label(self, placement: Placement) -> String {
        let head = match self {
            BoxRelation::Fits => "fits",
            BoxRelation::LeavesLeft => "leaves-left",
            BoxRelation::LeavesRight => "leaves-right",
        };
        format!("{head}{}", placement.label())
    }
}

/// Whether the arc fits in the box at `placement` or sticks out of it.
pub fn box_relation(kind: BoxRelation, placement: Placement, p: &CoverParams) -> ConstraintSystem {
    let xl = placement.left_wall(p);
    let xr = placement.right_wall(p);
    let c = match kind {
        BoxRelation::Fits => vec![
            Constraint::ge(Affine::x(8), xl, Tag::Placement),
            Constraint::le(Affine::x(4), xr, Tag::Placement),
        ],
        BoxRelation::LeavesLeft => vec![Constraint::le(Affine::x(8), xl, Tag::Placement)],
        BoxRelation::LeavesRight => vec![Constraint::ge(Affine::x(4), xr, Tag::Placement)],
    };
    c.into_iter().collect()
}
