//! Affine constraints over z = (x1, y1, ..., x8, y8).

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NVARS: usize = 16;

/// Index of `x_k` for a 1-based point index `k`.
pub const fn xi(k: usize) -> usize {
    2 * (k - 1)
}

/// Index of `y_k` for a 1-based point index `k`.
pub const fn yi(k: usize) -> usize {
    2 * (k - 1) + 1
}

/// `coeffs . z + constant`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub coeffs: [f64; NVARS],
    pub constant: f64,
}

impl Affine {
    pub fn zero() -> Self {
        Affine { coeffs: [0.0; NVARS], constant: 0.0 }
    }

    pub fn constant(c: f64) -> Self {
        Affine { coeffs: [0.0; NVARS], constant: c }
    }

    pub fn var(i: usize) -> Self {
        let mut a = Self::zero();
        a.coeffs[i] = 1.0;
        a
    }

    pub fn x(k: usize) -> Self {
        Self::var(xi(k))
    }

    pub fn y(k: usize) -> Self {
        Self::var(yi(k))
    }

    pub fn eval(&self, z: &[f64; NVARS]) -> f64 {
        self.coeffs.iter().zip(z).map(|(a, b)| a * b).sum::<f64>() + self.constant
    }
}

impl Add for Affine {
    type Output = Affine;
    fn add(mut self, o: Affine) -> Affine {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a += b;
        }
        self.constant += o.constant;
        self
    }
}

impl Add<f64> for Affine {
    type Output = Affine;
    fn add(mut self, c: f64) -> Affine {
        self.constant += c;
        self
    }
}

impl Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        self + (-o)
    }
}

impl Sub<f64> for Affine {
    type Output = Affine;
    fn sub(self, c: f64) -> Affine {
        self + (-c)
    }
}

impl Mul<f64> for Affine {
    type Output = Affine;
    fn mul(mut self, k: f64) -> Affine {
        for a in self.coeffs.iter_mut() {
            *a *= k;
        }
        self.constant *= k;
        self
    }
}

impl Neg for Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        self * -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Support,
    Touching,
    Placement,
    Corner,
    BoxWidth,
}

/// `coeffs . z  rel  rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: [f64; NVARS],
    pub rel: Relation,
    pub rhs: f64,
    pub tag: Tag,
}

impl Constraint {
    /// `lhs rel rhs` with both sides affine.
    pub fn new(lhs: Affine, rel: Relation, rhs: Affine, tag: Tag) -> Self {
        let d = lhs - rhs;
        Constraint { coeffs: d.coeffs, rel, rhs: -d.constant, tag }
    }

    pub fn le(lhs: Affine, rhs: Affine, tag: Tag) -> Self {
        Self::new(lhs, Relation::Le, rhs, tag)
    }

    pub fn ge(lhs: Affine, rhs: Affine, tag: Tag) -> Self {
        Self::new(lhs, Relation::Ge, rhs, tag)
    }

    pub fn eq(lhs: Affine, rhs: Affine, tag: Tag) -> Self {
        Self::new(lhs, Relation::Eq, rhs, tag)
    }

    pub fn lhs(&self, z: &[f64; NVARS]) -> f64 {
        self.coeffs.iter().zip(z).map(|(a, b)| a * b).sum()
    }

    /// Nonnegative slack for satisfied inequalities; `-|violation|` otherwise.
    pub fn slack(&self, z: &[f64; NVARS]) -> f64 {
        let v = self.lhs(z);
        match self.rel {
            Relation::Le => self.rhs - v,
            Relation::Ge => v - self.rhs,
            Relation::Eq => -(v - self.rhs).abs(),
        }
    }

    pub fn violation(&self, z: &[f64; NVARS]) -> f64 {
        (-self.slack(z)).max(0.0)
    }

    /// The same constraint after the left-right mirror of the octagon.
    pub fn mirrored(&self) -> Constraint {
        let mut coeffs = [0.0; NVARS];
        for k in 1..=8 {
            let j = mirror_index(k);
            coeffs[xi(j)] = -self.coeffs[xi(k)];
            coeffs[yi(j)] = self.coeffs[yi(k)];
        }
        Constraint { coeffs, rel: self.rel, rhs: self.rhs, tag: self.tag }
    }
}

/// Point relabeling under `x -> -x`: the lower-left point becomes the
/// lower-right one and so on.
pub const fn mirror_index(k: usize) -> usize {
    match k {
        1 => 3,
        3 => 1,
        4 => 8,
        8 => 4,
        5 => 7,
        7 => 5,
        other => other,
    }
}

/// Mirrors a point vector: `x'_k = -x_{sigma(k)}`, `y'_k = y_{sigma(k)}`.
pub fn mirror_point(z: &[f64; NVARS]) -> [f64; NVARS] {
    let mut out = [0.0; NVARS];
    for k in 1..=8 {
        let j = mirror_index(k);
        out[xi(j)] = -z[xi(k)];
        out[yi(j)] = z[yi(k)];
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintSystem {
    pub constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn extend(&mut self, other: &ConstraintSystem) {
        self.constraints.extend(other.constraints.iter().cloned());
    }

    pub fn with(mut self, other: &ConstraintSystem) -> Self {
        self.extend(other);
        self
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Constraint> {
        self.constraints.iter()
    }

    pub fn max_violation(&self, z: &[f64; NVARS]) -> f64 {
        self.iter().map(|c| c.violation(z)).fold(0.0, f64::max)
    }

    pub fn is_satisfied(&self, z: &[f64; NVARS], tol: f64) -> bool {
        self.max_violation(z) <= tol
    }

    pub fn mirrored(&self) -> ConstraintSystem {
        ConstraintSystem {
            constraints: self.iter().map(Constraint::mirrored).collect(),
        }
    }

    /// True when every constraint is invariant under `x_k -> x_k + c`.
    pub fn x_translation_invariant(&self) -> bool {
        self.iter().all(|c| {
            let sum: f64 = (1..=8).map(|k| c.coeffs[xi(k)]).sum();
            let scale = c.coeffs.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            sum.abs() <= 1e-12 * scale
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("constraint systems serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let sys: ConstraintSystem = serde_json::from_str(text)?;
        for (i, c) in sys.iter().enumerate() {
            if !c.rhs.is_finite() || c.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(Error::Malformed(format!("constraint {i} has a non-finite entry")));
            }
        }
        Ok(sys)
    }
}

impl FromIterator<Constraint> for ConstraintSystem {
    fn from_iter<I: IntoIterator<Item = Constraint>>(iter: I) -> Self {
        ConstraintSystem { constraints: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a ConstraintSystem {
    type Item = &'a Constraint;
    type IntoIter = std::slice::Iter<'a, Constraint>;
    fn into_iter(self) -> Self::IntoIter {
        self.constraints.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_normal_form() {
        let c = Constraint::le(Affine::x(4) - Affine::x(8), Affine::constant(0.5), Tag::BoxWidth);
        assert_eq!(c.coeffs[xi(4)], 1.0);
        assert_eq!(c.coeffs[xi(8)], -1.0);
        assert_eq!(c.rhs, 0.5);
        let mut z = [0.0; NVARS];
        z[xi(4)] = 0.7;
        assert!((c.violation(&z) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn mirror_is_involution() {
        let mut z = [0.0; NVARS];
        for (i, v) in z.iter_mut().enumerate() {
            *v = i as f64 * 0.37 - 1.0;
        }
        assert_eq!(mirror_point(&mirror_point(&z)), z);
        let c = Constraint::ge(Affine::y(5) + Affine::x(5) * 2.0, Affine::x(8) + 0.3, Tag::Corner);
        assert_eq!(c.mirrored().mirrored(), c);
        assert!((c.slack(&z) - c.mirrored().slack(&mirror_point(&z))).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let sys: ConstraintSystem =
            [Constraint::eq(Affine::y(2), Affine::zero(), Tag::Touching)].into_iter().collect();
        let text = sys.to_json_string();
        assert!(text.contains("\"rel\": \"eq\""));
        assert!(text.contains("\"tag\": \"touching\""));
        assert_eq!(ConstraintSystem::from_json_str(&text).unwrap(), sys);
        assert!(ConstraintSystem::from_json_str(r#"[{"coeffs":[1],"rel":"le","rhs":0,"tag":"corner"}]"#).is_err());
        assert!(ConstraintSystem::from_json_str(r#"[{"coeffs":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0],"rel":"lt","rhs":0,"tag":"corner"}]"#).is_err());
    }
}
