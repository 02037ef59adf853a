//! The cover region: a `l x w` rectangle with two opposite corners cut off
//! by parallel segments of slope `-m`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Horizontal leg of the big clip in the reference cover.
pub const CANONICAL_S: f64 = 0.1420171;
/// Vertical leg of the big clip in the reference cover.
pub const CANONICAL_T: f64 = 0.1481552;
/// Horizontal leg of the small clip in the reference cover.
pub const CANONICAL_S2: f64 = 0.0617141;

pub fn rect_width() -> f64 {
    1.0 / PI
}

pub fn rect_height() -> f64 {
    (0.25 - 1.0 / (PI * PI)).sqrt()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    UpperLeft,
    UpperRight,
    LowerLeft,
    LowerRight,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::UpperRight,
        Corner::UpperLeft,
        Corner::LowerRight,
        Corner::LowerLeft,
    ];

    pub fn opposite(self) -> Corner {
        match self {
            Corner::UpperLeft => Corner::LowerRight,
            Corner::UpperRight => Corner::LowerLeft,
            Corner::LowerLeft => Corner::UpperRight,
            Corner::LowerRight => Corner::UpperLeft,
        }
    }

    /// Corner position in the box `[0, l] x [0, w]`.
    pub fn position(self, l: f64, w: f64) -> Point {
        match self {
            Corner::UpperLeft => Point::new(0.0, w),
            Corner::UpperRight => Point::new(l, w),
            Corner::LowerLeft => Point::new(0.0, 0.0),
            Corner::LowerRight => Point::new(l, 0.0),
        }
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            Corner::UpperLeft => "UL",
            Corner::UpperRight => "UR",
            Corner::LowerLeft => "LL",
            Corner::LowerRight => "LR",
        }
    }
}

/// Scalars defining the cover. `l` and `w` are always derived from pi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsInput")]
pub struct CoverParams {
    pub l: f64,
    pub w: f64,
    pub s: f64,
    pub t: f64,
    pub s2: f64,
    pub t2: f64,
    pub m: f64,
    pub theta: f64,
}

#[derive(Deserialize)]
struct ParamsInput {
    s: f64,
    t: f64,
    s2: f64,
}

/// The on-disk params file: exactly `{s, t, s2}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    s: f64,
    t: f64,
    s2: f64,
}

impl TryFrom<ParamsInput> for CoverParams {
    type Error = Error;
    fn try_from(p: ParamsInput) -> Result<Self> {
        CoverParams::degenerate(p.s, p.t, p.s2)
    }
}

impl CoverParams {
    /// Strict constructor: both clips must be proper triangles.
    pub fn new(s: f64, t: f64, s2: f64) -> Result<Self> {
        let p = Self::build(s, t, s2)?;
        if !(s2 > 0.0 && s2 < s && s < p.l) {
            return Err(Error::InvalidParams(format!(
                "need 0 < s2 < s < l, got s = {s}, s2 = {s2}"
            )));
        }
        if !(p.t2 > 0.0 && p.t2 < t && t < p.w) {
            return Err(Error::InvalidParams(format!(
                "need 0 < t2 < t < w, got t = {t}, t2 = {}",
                p.t2
            )));
        }
        Ok(p)
    }

    /// Closed constructor admitting vanishing clips: `s2 = 0` gives the
    /// pentagon family, `s = t = s2 = 0` the plain rectangle.
    pub fn degenerate(s: f64, t: f64, s2: f64) -> Result<Self> {
        let p = Self::build(s, t, s2)?;
        if !(0.0 <= s2 && s2 <= s && s < p.l && 0.0 <= t && t < p.w) {
            return Err(Error::InvalidParams(format!(
                "need 0 <= s2 <= s < l and 0 <= t < w, got s = {s}, t = {t}, s2 = {s2}"
            )));
        }
        if (s == 0.0) != (t == 0.0) {
            return Err(Error::InvalidParams(
                "s and t must vanish together".to_string(),
            ));
        }
        Ok(p)
    }

    fn build(s: f64, t: f64, s2: f64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite() && s2.is_finite()) {
            return Err(Error::InvalidParams("non-finite value".to_string()));
        }
        let (m, t2) = if s > 0.0 { (t / s, t / s * s2) } else { (1.0, 0.0) };
        Ok(CoverParams {
            l: rect_width(),
            w: rect_height(),
            s,
            t,
            s2,
            t2,
            m,
            theta: m.atan(),
        })
    }

    pub fn canonical() -> Self {
        Self::new(CANONICAL_S, CANONICAL_T, CANONICAL_S2).expect("canonical params are valid")
    }

    pub fn pentagon(s: f64, t: f64) -> Result<Self> {
        Self::degenerate(s, t, 0.0)
    }

    pub fn uncut_rectangle() -> Self {
        Self::degenerate(0.0, 0.0, 0.0).expect("rectangle params are valid")
    }

    /// Parses a params file holding exactly `{"s": .., "t": .., "s2": ..}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let f: ParamsFile = serde_json::from_str(text)?;
        Self::degenerate(f.s, f.t, f.s2)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::json!({ "s": self.s, "t": self.t, "s2": self.s2 }).to_string()
    }

    pub fn area(&self) -> f64 {
        area(self)
    }

    pub fn hexagon(&self) -> Hexagon {
        Hexagon::new(self)
    }
}

/// `l w - s t (1 + (s2/s)^2) / 2`.
pub fn area(p: &CoverParams) -> f64 {
    let ratio = if p.s > 0.0 { p.s2 / p.s } else { 0.0 };
    p.l * p.w - 0.5 * p.s * p.t * (1.0 + ratio * ratio)
}

/// Closed half-plane `normal . p <= offset` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point, offset: f64) -> Self {
        let n = normal.norm();
        HalfPlane {
            normal: normal * (1.0 / n),
            offset: offset / n,
        }
    }

    pub fn excess(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Reflection flags relative to the canonical pose (big clip upper-right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Configuration {
    pub const ALL: [Configuration; 4] = [
        Configuration { flip_x: false, flip_y: false },
        Configuration { flip_x: true, flip_y: false },
        Configuration { flip_x: false, flip_y: true },
        Configuration { flip_x: true, flip_y: true },
    ];

    pub fn big_corner(self) -> Corner {
        match (self.flip_x, self.flip_y) {
            (false, false) => Corner::UpperRight,
            (true, false) => Corner::UpperLeft,
            (false, true) => Corner::LowerRight,
            (true, true) => Corner::LowerLeft,
        }
    }

    pub fn compose(self, o: Configuration) -> Configuration {
        Configuration {
            flip_x: self.flip_x ^ o.flip_x,
            flip_y: self.flip_y ^ o.flip_y,
        }
    }

    /// Reflects `p` within the box `[0, l] x [0, w]`.
    pub fn apply(self, p: Point, l: f64, w: f64) -> Point {
        Point::new(
            if self.flip_x { l - p.x } else { p.x },
            if self.flip_y { w - p.y } else { p.y },
        )
    }

    fn orientation_reversed(self) -> bool {
        self.flip_x ^ self.flip_y
    }
}

/// Convex cover polygon stored both as counterclockwise vertices and as
/// half-planes. Degenerate clips repeat vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Hexagon {
    pub vertices: Vec<Point>,
    pub halfplanes: Vec<HalfPlane>,
    pub l: f64,
    pub w: f64,
}

impl Hexagon {
    pub fn new(p: &CoverParams) -> Self {
        let (l, w, m) = (p.l, p.w, p.m);
        let vertices = vec![
            Point::new(p.s2, 0.0),
            Point::new(l, 0.0),
            Point::new(l, w - p.t),
            Point::new(l - p.s, w),
            Point::new(0.0, w),
            Point::new(0.0, p.t2),
        ];
        let halfplanes = vec![
            HalfPlane::new(Point::new(0.0, -1.0), 0.0),
            HalfPlane::new(Point::new(1.0, 0.0), l),
            HalfPlane::new(Point::new(m, 1.0), w - p.t + m * l),
            HalfPlane::new(Point::new(0.0, 1.0), w),
            HalfPlane::new(Point::new(-1.0, 0.0), 0.0),
            HalfPlane::new(Point::new(-m, -1.0), -p.t2),
        ];
        Hexagon { vertices, halfplanes, l, w }
    }

    /// The cover reflected so that its big clip sits at `cfg.big_corner()`.
    pub fn configured(p: &CoverParams, cfg: Configuration) -> Self {
        let base = Hexagon::new(p);
        let (l, w) = (base.l, base.w);
        let mut vertices: Vec<Point> = base.vertices.iter().map(|&v| cfg.apply(v, l, w)).collect();
        if cfg.orientation_reversed() {
            vertices.reverse();
        }
        let halfplanes = base
            .halfplanes
            .iter()
            .map(|h| {
                let n = h.normal;
                let mut normal = n;
                let mut offset = h.offset;
                if cfg.flip_x {
                    normal.x = -normal.x;
                    offset -= n.x * l;
                }
                if cfg.flip_y {
                    normal.y = -normal.y;
                    offset -= n.y * w;
                }
                HalfPlane { normal, offset }
            })
            .collect();
        Hexagon { vertices, halfplanes, l, w }
    }

    pub fn shoelace_area(&self) -> f64 {
        let n = self.vertices.len();
        let twice: f64 = (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum();
        0.5 * twice
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        contains_point(self, p, tol)
    }

    /// Cuts the corner at `corner` by a 45-degree line at `depth` from the
    /// corner along the box diagonal direction.
    pub fn with_corner_clip(&self, corner: Corner, depth: f64) -> Hexagon {
        let c = corner.position(self.l, self.w);
        let center = Point::new(self.l / 2.0, self.w / 2.0);
        let d = c - center;
        let normal = Point::new(d.x.signum(), d.y.signum());
        let plane = HalfPlane::new(normal, normal.dot(c) - depth * normal.norm());
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let (ea, eb) = (plane.excess(a), plane.excess(b));
            if ea <= 0.0 {
                vertices.push(a);
            }
            if (ea < 0.0 && eb > 0.0) || (ea > 0.0 && eb < 0.0) {
                let t = ea / (ea - eb);
                vertices.push(a + (b - a) * t);
            }
        }
        let mut halfplanes = self.halfplanes.clone();
        halfplanes.push(plane);
        Hexagon { vertices, halfplanes, l: self.l, w: self.w }
    }
}

impl fmt::Display for Hexagon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({:.7}, {:.7})", v.x, v.y))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// True iff `p` passes every half-plane test within `tol`.
pub fn contains_point(hex: &Hexagon, p: Point, tol: f64) -> bool {
    hex.halfplanes.iter().all(|h| h.excess(p) <= tol)
}

/// Whether the diagonal from `(l, 0)` to `(0, w)`, of length exactly 1/2,
/// lies in `hex`. By convexity the endpoints decide.
pub fn half_segment_inside(hex: &Hexagon) -> bool {
    let a = Point::new(hex.l, 0.0);
    let b = Point::new(0.0, hex.w);
    contains_point(hex, a, 1e-12) && contains_point(hex, b, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn canonical_derived_values() {
        let p = CoverParams::canonical();
        assert_eq!(p.m, p.t / p.s);
        assert!((p.m - 1.0432213).abs() < 1e-6);
        assert!((p.t2 - 0.0643815).abs() < 1e-7);
        assert!((p.l - 0.3183099).abs() < 1e-7);
        assert!((p.w - 0.3855889).abs() < 1e-7);
        assert!((p.l * p.l + p.w * p.w - 0.25).abs() < 1e-12);
        assert_eq!(p.t2, p.t / p.s * p.s2);
    }

    #[test]
    fn rejects_bad_triples() {
        assert!(CoverParams::new(0.1, 0.1, 0.2).is_err());
        assert!(CoverParams::new(0.4, 0.1, 0.01).is_err());
        assert!(CoverParams::new(0.1, 0.5, 0.01).is_err());
        assert!(CoverParams::new(0.1, 0.1, 0.0).is_err());
        assert!(CoverParams::new(f64::NAN, 0.1, 0.01).is_err());
        assert!(CoverParams::degenerate(0.1, 0.0, 0.0).is_err());
        assert!(CoverParams::degenerate(0.1, 0.1, 0.0).is_ok());
    }

    #[test]
    fn areas() {
        let p = CoverParams::canonical();
        assert!((area(&p) - 0.1102299).abs() < 1e-6);
        assert!((p.hexagon().shoelace_area() - area(&p)).abs() < 1e-12);
        let r = CoverParams::uncut_rectangle();
        assert!((area(&r) - 0.1227368).abs() < 1e-6);
        assert!((r.hexagon().shoelace_area() - area(&r)).abs() < 1e-12);
    }

    #[test]
    fn containment_examples() {
        let p = CoverParams::canonical();
        let h = p.hexagon();
        assert!(h.contains(Point::new(p.l / 2.0, p.w / 2.0), 0.0));
        assert!(!h.contains(Point::new(p.l - 0.01, p.w - 0.01), 0.0));
        assert!(!h.contains(Point::new(0.01, 0.01), 0.0));
        assert!(h.contains(Point::new(p.l, 0.0), 1e-12));
        assert!(h.contains(Point::new(0.0, p.w), 1e-12));
        assert!(half_segment_inside(&h));
    }

    #[test]
    fn cut_slopes() {
        let h = CoverParams::canonical().hexagon();
        let v = &h.vertices;
        let m = CoverParams::canonical().m;
        let big = (v[3].y - v[2].y) / (v[3].x - v[2].x);
        let small = (v[0].y - v[5].y) / (v[0].x - v[5].x);
        assert!((big + m).abs() < 1e-12);
        assert!((small + m).abs() < 1e-12);
    }

    #[test]
    fn configurations_are_distinct_involutions() {
        let p = CoverParams::canonical();
        let corners: std::collections::HashSet<_> =
            Configuration::ALL.iter().map(|c| c.big_corner()).collect();
        assert_eq!(corners.len(), 4);
        for c in Configuration::ALL {
            assert_eq!(c.compose(c), Configuration::ALL[0]);
            let h = Hexagon::configured(&p, c);
            assert!((h.shoelace_area() - area(&p)).abs() < 1e-12);
            let big = c.big_corner().position(p.l, p.w);
            assert!(!h.contains(big, 1e-9));
        }
    }

    #[test]
    fn corner_clip_severs_diagonal() {
        let h = CoverParams::canonical().hexagon();
        assert!(half_segment_inside(&h.with_corner_clip(Corner::LowerRight, 0.0)));
        assert!(!half_segment_inside(&h.with_corner_clip(Corner::LowerRight, 1e-4)));
        assert!(!half_segment_inside(&h.with_corner_clip(Corner::UpperLeft, 1e-4)));
    }

    #[test]
    fn params_file_is_strict() {
        let p = CoverParams::from_json_str(r#"{"s":0.1420171,"t":0.1481552,"s2":0.0617141}"#).unwrap();
        assert_eq!(p, CoverParams::canonical());
        assert!(CoverParams::from_json_str(r#"{"s":0.1,"t":0.1,"s2":0.01,"l":1}"#).is_err());
        assert!(CoverParams::from_json_str(r#"{"s":0.1,"t":0.1}"#).is_err());
        let back: CoverParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
