use arccover::catalog::{base_system, build_catalog, find_case};
use arccover::constraint::{Affine, Constraint, ConstraintSystem, Tag};
use arccover::geometry::{rect_height, Point};
use arccover::oracle::{
    grid_lower_sanity, monte_carlo, random_curve, sample_and_place, subgradient_minimize, verify_placement,
    ConvexUnitCurve, FailureDump, PlaceOutcome, CONTAIN_TOL,
};
use arccover::{minimize_chain_length, CoverParams, Error, SolveOptions};

#[test]
fn oracle_brackets_the_interior_point_minimum() {
    let p = CoverParams::canonical();
    for case in build_catalog(&p) {
        let r = minimize_chain_length(&case.constraints, &SolveOptions::default()).unwrap();
        let o = subgradient_minimize(&case.constraints, 3, 7).unwrap();
        assert!(o >= r.lower_bound - 1e-9, "{}: oracle {o} below bound {}", case.name, r.lower_bound);
        assert!((o - r.primal_value).abs() <= 1e-5, "{}: oracle {o} ipm {}", case.name, r.primal_value);
    }
}

#[test]
fn oracle_base_problem() {
    let w = rect_height();
    let v = subgradient_minimize(&base_system(&CoverParams::canonical()), 2, 1).unwrap();
    assert!((v - 2.0 * w).abs() <= 1e-4);
}

#[test]
fn oracle_fixed_edge_is_traversed_twice() {
    let sys: ConstraintSystem = [
        Constraint::eq(Affine::x(1), Affine::constant(0.0), Tag::Placement),
        Constraint::eq(Affine::y(1), Affine::constant(0.0), Tag::Placement),
        Constraint::eq(Affine::x(2), Affine::constant(3.0), Tag::Placement),
        Constraint::eq(Affine::y(2), Affine::constant(4.0), Tag::Placement),
    ]
    .into_iter()
    .collect();
    let v = subgradient_minimize(&sys, 1, 0).unwrap();
    assert!((v - 10.0).abs() <= 1e-6, "{v}");
}

#[test]
fn oracle_reports_infeasible_systems() {
    let sys: ConstraintSystem = [
        Constraint::ge(Affine::x(1), Affine::constant(1.0), Tag::Placement),
        Constraint::le(Affine::x(1), Affine::constant(0.0), Tag::Placement),
    ]
    .into_iter()
    .collect();
    assert!(matches!(subgradient_minimize(&sys, 1, 0), Err(Error::Infeasible)));
    assert_eq!(grid_lower_sanity(&sys, 4).unwrap(), f64::INFINITY);
}

#[test]
fn grid_bound_on_base_problem() {
    let w = rect_height();
    let v = grid_lower_sanity(&base_system(&CoverParams::canonical()), 8).unwrap();
    assert!(v >= 2.0 * w - 1e-9 && v <= 2.0 * w + 0.05, "{v}");
}

#[test]
fn grid_values_never_undercut_certified_bounds() {
    let p = CoverParams::canonical();
    for case in build_catalog(&p) {
        let r = minimize_chain_length(&case.constraints, &SolveOptions::default()).unwrap();
        let g = grid_lower_sanity(&case.constraints, 8).unwrap();
        assert!(g >= r.lower_bound - 1e-9, "{}: grid {g} bound {}", case.name, r.lower_bound);
    }
    let g = grid_lower_sanity(&find_case(&p, "1.2uC").unwrap().constraints, 8).unwrap();
    assert!(g >= 1.02231 - 1e-6);
}

#[test]
fn circle_surrogate_is_placed() {
    let p = CoverParams::canonical();
    let c = ConvexUnitCurve::regular(64);
    let out = sample_and_place(&c, &p, 720).unwrap();
    let PlaceOutcome::Placed(pl) = out else { panic!("64-gon not placed") };
    assert!(verify_placement(&p.hexagon(), &c, &pl, CONTAIN_TOL));
}

#[test]
fn doubled_segment_lies_on_the_free_diagonal() {
    let p = CoverParams::canonical();
    let c = ConvexUnitCurve::doubled_segment();
    let PlaceOutcome::Placed(pl) = sample_and_place(&c, &p, 720).unwrap() else { panic!("segment not placed") };
    let ends: Vec<Point> = c.transformed(pl.angle, pl.flip_x, pl.flip_y).iter().map(|&v| v + pl.translation).collect();
    let corners = [Point::new(p.l, 0.0), Point::new(0.0, p.w)];
    for e in ends {
        assert!(corners.iter().any(|&k| k.dist(e) < 1e-6), "endpoint {e:?} off the diagonal");
    }
}

#[test]
fn placement_is_rotation_invariant() {
    let p = CoverParams::canonical();
    for trial in 0..40 {
        let c = random_curve(77, trial);
        for a in [0.3, 1.7, 4.0] {
            assert!(sample_and_place(&c.rotated(a), &p, 720).unwrap().is_placed(), "trial {trial} angle {a}");
        }
    }
}

#[test]
fn small_monte_carlo_run() {
    let r = monte_carlo(&CoverParams::canonical(), 500, 3, 720).unwrap();
    assert_eq!(r.placed, 500);
    assert!(r.failures.is_empty());
}

#[test]
fn failure_dump_round_trip() {
    let p = CoverParams::canonical();
    let curve = random_curve(1, 2);
    let PlaceOutcome::Placed(best) = sample_and_place(&curve, &p, 720).unwrap() else { panic!() };
    let dump = FailureDump { seed: 1, trial: 2, curve, params: p, angle_steps: 720, best };
    assert_eq!(FailureDump::from_json_str(&dump.to_json_string()).unwrap(), dump);
    assert!(FailureDump::from_json_str("{}").is_err());
}
