//! The case tree as data: every named program is a conjunction of
//! corner predicates and box relations on top of the base system.

use serde::{Deserialize, Serialize};

use crate::constraint::ConstraintSystem;
use crate::error::{Error, Result};
use crate::geometry::CoverParams;
use crate::support::{
    box_relation, box_width_constraint, support_constraints, touching_constraints, BoxRelation,
    CornerPredicate, Placement,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub name: String,
    /// Labels of the predicates and box relations beyond the base system.
    pub predicates: Vec<String>,
    pub constraints: ConstraintSystem,
    pub published_bound: Option<f64>,
    pub narrative: String,
}

/// Support, touching and box-width constraints shared by every case.
pub fn base_system(p: &CoverParams) -> ConstraintSystem {
    let mut sys = support_constraints(p.m).with(&touching_constraints(p.w));
    sys.push(box_width_constraint(p.l));
    sys
}

#[derive(Clone, Copy, Debug)]
enum Item {
    Pred(CornerPredicate),
    Rel(BoxRelation, Placement),
}

use Item::{Pred, Rel};
use Placement::{Left as L, Right as R, L7, R3, R5};

fn big(k: usize, at: Placement) -> Item {
    Pred(CornerPredicate::big(k, at))
}

fn small(k: usize, at: Placement) -> Item {
    Pred(CornerPredicate::small(k, at))
}

fn fits(at: Placement) -> Item {
    Rel(BoxRelation::Fits, at)
}

fn leaves_left(at: Placement) -> Item {
    Rel(BoxRelation::LeavesLeft, at)
}

fn leaves_right(at: Placement) -> Item {
    Rel(BoxRelation::LeavesRight, at)
}

// Left-justified situations.
fn c1() -> Vec<Item> {
    vec![big(3, L), big(5, L)]
}
fn c2() -> Vec<Item> {
    vec![big(5, L), small(7, L)]
}
fn c3() -> Vec<Item> {
    vec![small(1, L), small(7, L)]
}

// Right-justified situations.
fn r11() -> Vec<Item> {
    vec![big(7, R), big(1, R)]
}
fn r2u() -> Vec<Item> {
    vec![big(7, R), small(5, R)]
}
fn r2d() -> Vec<Item> {
    vec![big(1, R), small(3, R)]
}
fn r3() -> Vec<Item> {
    vec![small(3, R), small(5, R)]
}

// p3 reaches its small corner before p5 when the box moves left.
fn down() -> Vec<Item> {
    vec![small(3, R5)]
}

// Arc inside the box at a critical translation, both big corners hit.
fn at_l7() -> Vec<Item> {
    vec![fits(L7), big(3, L7), big(5, L7)]
}
fn at_r5() -> Vec<Item> {
    vec![fits(R5), big(1, R5), big(7, R5)]
}
fn at_r3() -> Vec<Item> {
    vec![fits(R3), big(1, R3), big(7, R3)]
}

fn table() -> Vec<(&'static str, Option<f64>, Vec<Vec<Item>>, &'static str)> {
    vec![
        ("1.1", None, vec![c1(), r11()],
         "Case 1: OUTL3 and OUTL5; both big corners also hit when right-justified"),
        ("1.2uL", Some(1.001), vec![c1(), r2u(), vec![leaves_left(R5)]],
         "Subcase 1.2u: OUTR7 and outR5; the arc leaves the box on the left at x_R5"),
        ("1.2uC", Some(1.02231), vec![c1(), r2u(), at_r5()],
         "Subcase 1.2u: OUTR7 and outR5; the arc stays in the box at x_R5"),
        ("1.3C", Some(1.00852), vec![c1(), r3(), at_r5(), vec![fits(R3), big(7, R3)]],
         "Subcase 1.3: outR3 and outR5; arc inside at both x_R5 and x_R3"),
        ("1.3LC", Some(1.00994), vec![c1(), r3(), vec![leaves_left(R5), fits(R3), big(7, R3)]],
         "Subcase 1.3: leaves on the left at x_R5, inside at x_R3"),
        ("1.3LL", Some(1.04008), vec![c1(), r3(), vec![leaves_left(R5), leaves_left(R3)]],
         "Subcase 1.3: leaves on the left at both x_R5 and x_R3"),
        ("2C.2uC", Some(1.0093), vec![c2(), r2u(), at_l7(), at_r5()],
         "Case 2: OUTL5 and outL7; OUTR7 and outR5; inside at x_L7 and x_R5"),
        ("2C.2uL", Some(1.01069), vec![c2(), r2u(), at_l7(), vec![leaves_left(R5)]],
         "Case 2: inside at x_L7, leaves on the left at x_R5"),
        ("2R.2uL", Some(1.03344), vec![c2(), r2u(), vec![leaves_right(L7), leaves_left(R5)]],
         "Case 2: leaves on the right at x_L7 and on the left at x_R5"),
        ("2.2d", Some(1.00584), vec![c2(), r2d()],
         "Case 2: OUTR1 and outR3"),
        ("2C.3uC", Some(1.00596), vec![c2(), r3(), at_l7(), at_r5()],
         "Case 2: outR3 and outR5, p5 first; inside at x_L7 and x_R5"),
        ("2.3uL", Some(1.00318), vec![c2(), r3(), vec![leaves_left(R5)]],
         "Case 2: outR3 and outR5, p5 first; leaves on the left at x_R5"),
        ("2R.3u", Some(1.00392), vec![c2(), r3(), vec![leaves_right(L7)]],
         "Case 2: outR3 and outR5, p5 first; leaves on the right at x_L7"),
        ("2C.3dC", Some(1.00854), vec![c2(), r3(), down(), at_l7(), at_r3()],
         "Case 2: outR3 and outR5, p3 first; inside at x_L7 and x_R3"),
        ("2.3dL", Some(1.00504), vec![c2(), r3(), down(), vec![leaves_left(R3)]],
         "Case 2: outR3 and outR5, p3 first; leaves on the left at x_R3"),
        ("2R.3d", Some(1.00392), vec![c2(), r3(), down(), vec![leaves_right(L7)]],
         "Case 2: outR3 and outR5, p3 first; leaves on the right at x_L7"),
        ("3C.3uC", Some(1.00001), vec![c3(), r3(), at_l7(), at_r5()],
         "Case 3: outL1 and outL7; outR3 and outR5, p5 first; inside at x_L7 and x_R5"),
        ("3.3uL", Some(1.05382), vec![c3(), r3(), vec![leaves_left(R5)]],
         "Case 3: p5 first; leaves on the left at x_R5"),
        ("3C.3dC", Some(1.00001), vec![c3(), r3(), down(), at_l7(), at_r3()],
         "Case 3: outL1 and outL7; outR3 and outR5, p3 first; inside at x_L7 and x_R3"),
        ("3.3dL", Some(1.05367), vec![c3(), r3(), down(), vec![leaves_left(R3)]],
         "Case 3: p3 first; leaves on the left at x_R3"),
    ]
}

fn assemble(name: &str, bound: Option<f64>, groups: &[Vec<Item>], narrative: &str, p: &CoverParams) -> CaseSpec {
    let mut constraints = base_system(p);
    let mut predicates = Vec::new();
    for item in groups.iter().flatten() {
        match *item {
            Pred(pred) => {
                predicates.push(pred.to_string());
                constraints.push(pred.inequality(p));
            }
            Rel(kind, at) => {
                predicates.push(kind.label(at));
                constraints.extend(&box_relation(kind, at, p));
            }
        }
    }
    CaseSpec {
        name: name.to_string(),
        predicates,
        constraints,
        published_bound: bound,
        narrative: narrative.to_string(),
    }
}

/// All twenty programs in tree order.
pub fn build_catalog(p: &CoverParams) -> Vec<CaseSpec> {
    table()
        .iter()
        .map(|(name, bound, groups, narrative)| assemble(name, *bound, groups, narrative, p))
        .collect()
}

pub fn case_names() -> Vec<&'static str> {
    table().into_iter().map(|row| row.0).collect()
}

pub fn find_case(p: &CoverParams, name: &str) -> Result<CaseSpec> {
    table()
        .iter()
        .find(|row| row.0 == name)
        .map(|(name, bound, groups, narrative)| assemble(name, *bound, groups, narrative, p))
        .ok_or_else(|| Error::UnknownCase(name.to_string()))
}

/// Splits 3C.3uC or 3C.3dC on which of p3, p5 reaches its small corner
/// first, adding what the second critical translation then forces.
pub fn case_lattice_refinements(spec: &CaseSpec, p: &CoverParams) -> Result<Vec<CaseSpec>> {
    let children: Vec<(&str, Vec<Item>)> = match spec.name.as_str() {
        "3C.3uC" => vec![
            ("p5-first", vec![small(5, R3), fits(R3), big(7, R3)]),
            ("p3-first-C", vec![small(3, R5), fits(R3), big(1, R3), big(7, R3)]),
            ("p3-first-L", vec![small(3, R5), leaves_left(R3)]),
        ],
        "3C.3dC" => vec![
            ("p5-first", vec![small(5, R3), fits(R5), big(1, R5), big(7, R5)]),
            ("p3-first", vec![fits(R5), big(1, R5)]),
        ],
        other => return Err(Error::NoRefinement(other.to_string())),
    };
    Ok(children
        .into_iter()
        .map(|(suffix, extra)| {
            let mut child = spec.clone();
            child.name = format!("{}/{suffix}", spec.name);
            child.published_bound = None;
            let tail = assemble("", None, &[extra], "", p);
            let base_len = base_system(p).len();
            child.constraints.constraints.extend(tail.constraints.constraints.into_iter().skip(base_len));
            child.predicates.extend(tail.predicates);
            child
        })
        .collect())
}

pub fn catalog_to_json(cases: &[CaseSpec]) -> String {
    serde_json::to_string_pretty(cases).expect("catalog serializes")
}

pub fn catalog_from_json(text: &str) -> Result<Vec<CaseSpec>> {
    let cases: Vec<CaseSpec> = serde_json::from_str(text)?;
    for c in &cases {
        ConstraintSystem::from_json_str(&serde_json::to_string(&c.constraints)?)?;
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let p = CoverParams::canonical();
        let cat = build_catalog(&p);
        assert_eq!(cat.len(), 20);
        assert_eq!(cat.iter().filter(|c| c.published_bound.is_some()).count(), 19);
        for c in &cat {
            if let Some(b) = c.published_bound {
                assert!((1.00001..=1.06).contains(&b));
            }
            assert!(c.constraints.len() > base_system(&p).len());
        }
    }

    #[test]
    fn named_conjunctions() {
        let p = CoverParams::canonical();
        let c = find_case(&p, "1.2uL").unwrap();
        for label in ["OUTL3", "OUTL5", "OUTR7", "leaves-left@xR5"] {
            assert!(c.predicates.iter().any(|x| x == label), "{label}");
        }
        let c = find_case(&p, "3C.3uC").unwrap();
        for label in ["OUT3@xL7", "OUT5@xL7", "OUT1@xR5", "OUT7@xR5"] {
            assert!(c.predicates.iter().any(|x| x == label), "{label}");
        }
        assert!(matches!(find_case(&p, "9.9"), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn refinements_only_for_binding_cases() {
        let p = CoverParams::canonical();
        for name in ["3C.3uC", "3C.3dC"] {
            let parent = find_case(&p, name).unwrap();
            let kids = case_lattice_refinements(&parent, &p).unwrap();
            assert!(kids.len() >= 2);
            for k in &kids {
                assert!(k.constraints.constraints.starts_with(&parent.constraints.constraints));
            }
        }
        let other = find_case(&p, "2.2d").unwrap();
        assert!(case_lattice_refinements(&other, &p).is_err());
    }

    #[test]
    fn catalog_json_round_trip() {
        let cat = build_catalog(&CoverParams::canonical());
        let text = catalog_to_json(&cat);
        assert_eq!(catalog_from_json(&text).unwrap(), cat);
    }
}
