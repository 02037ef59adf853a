use arccover::geometry::{half_segment_inside, rect_height, rect_width, Point};
use arccover::CoverParams;
use proptest::prelude::*;

fn strict_params() -> impl Strategy<Value = CoverParams> {
    (0.01..0.3f64, 0.01..0.99f64, 0.01..0.99f64).prop_filter_map("valid triple", |(s, tf, sf)| {
        let t = tf * rect_height() * 0.9;
        CoverParams::new(s, t, sf * s).ok()
    })
}

#[test]
fn canonical_and_rectangle_areas() {
    assert!((CoverParams::canonical().area() - 0.1102299).abs() <= 1e-6);
    assert!((CoverParams::uncut_rectangle().area() - 0.1227368).abs() <= 1e-6);
    let l = rect_width();
    let w = rect_height();
    assert!((l * l + w * w - 0.25).abs() < 1e-15);
}

#[test]
fn invalid_triples_are_rejected() {
    assert!(CoverParams::new(0.1, 0.1, 0.2).is_err());
    assert!(CoverParams::new(0.5, 0.1, 0.05).is_err());
    assert!(CoverParams::new(f64::NAN, 0.1, 0.05).is_err());
    assert!(CoverParams::degenerate(0.1, 0.0, 0.0).is_err());
    assert!(CoverParams::from_json_str(r#"{"s": 0.1, "t": 0.1}"#).is_err());
    assert!(CoverParams::from_json_str(r#"{"s": 0.1, "t": 0.1, "s2": 0.05, "x": 1}"#).is_err());
}

proptest! {
    #[test]
    fn area_matches_shoelace(p in strict_params()) {
        prop_assert!((p.area() - p.hexagon().shoelace_area()).abs() <= 1e-12);
    }

    #[test]
    fn cuts_share_one_slope(p in strict_params()) {
        let v = p.hexagon().vertices;
        let slope = |a: Point, b: Point| (b.y - a.y) / (b.x - a.x);
        prop_assert!((slope(v[2], v[3]) + p.m).abs() <= 1e-12);
        prop_assert!((slope(v[5], v[0]) + p.m).abs() <= 1e-12);
    }

    #[test]
    fn half_diagonal_fits(p in strict_params()) {
        prop_assert!(half_segment_inside(&p.hexagon()));
    }

    #[test]
    fn params_json_round_trip(p in strict_params()) {
        let back = CoverParams::from_json_str(&p.to_json_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn vertices_lie_in_their_own_cover(p in strict_params()) {
        let hex = p.hexagon();
        for &v in &hex.vertices {
            prop_assert!(hex.contains(v, 1e-12));
        }
        prop_assert!(!hex.contains(Point::new(0.0, 0.0), 1e-12));
        prop_assert!(!hex.contains(Point::new(p.l, p.w), 1e-12));
    }
}
