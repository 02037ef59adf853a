use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

const PERIMETER_TOL: f64 = 1e-12;

/// Convex polygon of perimeter 1, vertices counterclockwise. Two vertices
/// give the doubled segment of length 1/2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexUnitCurve {
    vertices: Vec<Point>,
}

#[derive(Deserialize)]
struct CurveInput {
    vertices: Vec<Point>,
}

impl<'de> Deserialize<'de> for ConvexUnitCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let input = CurveInput::deserialize(d)?;
        ConvexUnitCurve::new(input.vertices).map_err(serde::de::Error::custom)
    }
}

pub fn perimeter(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n).map(|i| vertices[i].dist(vertices[(i + 1) % n])).sum()
}

impl ConvexUnitCurve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Malformed("a closed curve needs at least two vertices".into()));
        }
        if vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::Malformed("non-finite vertex".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) < -1e-12 {
                return Err(Error::Malformed("vertices are not convex and counterclockwise".into()));
            }
        }
        // One full turn: a star-shaped self-overlapping chain would pass
        // the local test.
        let mut turn = 0.0;
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            turn += e0.cross(e1).atan2(e0.dot(e1));
        }
        if n > 2 && (turn - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::Malformed("vertices wind more than once".into()));
        }
        let per = perimeter(&vertices);
        if (per - 1.0).abs() > PERIMETER_TOL {
            return Err(Error::Malformed(format!("perimeter {per} is not 1")));
        }
        Ok(ConvexUnitCurve { vertices })
    }

    /// Rescales a convex counterclockwise polygon to perimeter 1.
    pub fn normalized(vertices: Vec<Point>) -> Result<Self> {
        let per = perimeter(&vertices);
        if !(per > 0.0 && per.is_finite()) {
            return Err(Error::Malformed("polygon has zero perimeter".into()));
        }
        let first = vertices[0];
        let scaled: Vec<Point> = vertices.iter().map(|&v| (v - first) * (1.0 / per)).collect();
        // scaling can leave the sum a few ulps away from 1
        let per2 = perimeter(&scaled);
        Self::new(scaled.iter().map(|&v| v * (1.0 / per2)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn regular(n: usize) -> Self {
        let pts = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        Self::normalized(pts).expect("regular polygons are convex")
    }

    /// The segment of length 1/2 traversed there and back.
    pub fn doubled_segment() -> Self {
        ConvexUnitCurve { vertices: vec![Point::new(0.0, 0.0), Point::new(0.5, 0.0)] }
    }

    /// Random convex polygon with `n >= 3` vertices: random edge vectors with
    /// zero sum, sorted by angle and chained.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let n = n.max(3);
        loop {
            let xs = zero_sum_components(rng, n);
            let mut ys = zero_sum_components(rng, n);
            ys.shuffle(rng);
            let mut edges: Vec<Point> = xs.iter().zip(&ys).map(|(&x, &y)| Point::new(x, y)).collect();
            edges.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));
            let mut pts = Vec::with_capacity(n);
            let mut acc = Point::default();
            for e in &edges {
                pts.push(acc);
                acc = acc + *e;
            }
            if let Ok(c) = Self::normalized(pts) {
                return c;
            }
        }
    }

    pub fn transformed(&self, angle: f64, flip_x: bool, flip_y: bool) -> Vec<Point> {
        self.vertices
            .iter()
            .map(|&v| {
                let v = Point::new(if flip_x { -v.x } else { v.x }, if flip_y { -v.y } else { v.y });
                v.rotate(angle)
            })
            .collect()
    }

    pub fn rotated(&self, angle: f64) -> Self {
        ConvexUnitCurve { vertices: self.vertices.iter().map(|v| v.rotate(angle)).collect() }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Differences along two random monotone chains between the extremes of
/// `n` uniform samples; they sum to zero.
fn zero_sum_components<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    v.sort_by(f64::total_cmp);
    let (lo, hi) = (v[0], v[n - 1]);
    let mut out = Vec::with_capacity(n);
    let (mut last_a, mut last_b) = (lo, lo);
    for &x in &v[1..n - 1] {
        if rng.random::<bool>() {
            out.push(x - last_a);
            last_a = x;
        } else {
            out.push(last_b - x);
            last_b = x;
        }
    }
    out.push(hi - last_a);
    out.push(last_b - hi);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_curves_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3, 5, 12, 40] {
            let c = ConvexUnitCurve::random(&mut rng, n);
            assert!((perimeter(c.vertices()) - 1.0).abs() <= PERIMETER_TOL);
            assert!(ConvexUnitCurve::new(c.vertices().to_vec()).is_ok());
        }
    }

    #[test]
    fn rejects_clockwise() {
        let mut v = ConvexUnitCurve::regular(5).vertices().to_vec();
        v.reverse();
        assert!(ConvexUnitCurve::new(v).is_err());
    }

    #[test]
    fn rejects_wrong_perimeter() {
        let v = ConvexUnitCurve::regular(4).vertices().iter().map(|&p| p * 2.0).collect();
        assert!(ConvexUnitCurve::new(v).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = ConvexUnitCurve::regular(7);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ConvexUnitCurve::from_json_str(&text).unwrap(), c);
    }
}
