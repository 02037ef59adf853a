use arccover::catalog::{build_catalog, case_names, find_case};
use arccover::certify::{certify, certify_cases, CaseStatus, CertificationReport, Verdict, DEFAULT_THRESHOLD};
use arccover::{CoverParams, SolveOptions};

fn canonical_report(threshold: f64) -> CertificationReport {
    certify(&CoverParams::canonical(), threshold, &SolveOptions::default()).unwrap()
}

#[test]
fn canonical_cover_is_certified() {
    let r = canonical_report(DEFAULT_THRESHOLD);
    assert_eq!(r.verdict, Verdict::Certified);
    assert_eq!(r.cases.len(), case_names().len());
    for c in &r.cases {
        assert_eq!(c.status, CaseStatus::Certified, "{}", c.name);
        assert!(c.lower_bound >= DEFAULT_THRESHOLD - 1e-7, "{}: {}", c.name, c.lower_bound);
        assert!(c.lower_bound <= c.min_length);
    }
    assert!((r.area - 0.1102299).abs() <= 1e-6);
}

#[test]
fn raised_threshold_fails_on_three_corner_cases() {
    let r = canonical_report(1.001);
    assert_eq!(r.verdict, Verdict::Failed);
    let below: Vec<&str> = r.cases.iter().filter(|c| c.lower_bound < 1.001).map(|c| c.name.as_str()).collect();
    assert!(below.contains(&"3C.3uC") && below.contains(&"3C.3dC"), "{below:?}");
    let b = r.binding_case().unwrap();
    assert!(b.name.starts_with("3C."), "{}", b.name);
}

#[test]
fn rectangle_is_certified() {
    let p = CoverParams::uncut_rectangle();
    assert!((p.area() - 0.1227368).abs() <= 1e-6);
    let r = certify(&p, DEFAULT_THRESHOLD, &SolveOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Certified);
}

#[test]
fn reports_are_reproducible() {
    let mut a = canonical_report(DEFAULT_THRESHOLD);
    let mut b = canonical_report(DEFAULT_THRESHOLD);
    a.seconds = 0.0;
    b.seconds = 0.0;
    for c in a.cases.iter_mut().chain(b.cases.iter_mut()) {
        c.seconds = 0.0;
    }
    assert_eq!(a, b);
}

#[test]
fn report_json_round_trip() {
    let r = canonical_report(DEFAULT_THRESHOLD);
    let back = CertificationReport::from_json_str(&r.to_json_string()).unwrap();
    assert_eq!(back, r);
    let bad = r.to_json_string().replace("\"v1\"", "\"v0\"");
    assert!(CertificationReport::from_json_str(&bad).is_err());
}

#[test]
fn comparison_with_published_values() {
    let r = canonical_report(DEFAULT_THRESHOLD);
    let deltas = r.compare_to_published();
    assert_eq!(deltas.len(), 19);
    let d = deltas.iter().find(|d| d.name == "2.2d").unwrap();
    assert!(!d.flagged && d.delta <= 5e-3, "{d:?}");
    let get = |n: &str| r.cases.iter().find(|c| c.name == n).unwrap().min_length;
    assert!((get("2R.3u") - get("2R.3d")).abs() <= 1e-9);
    assert!((get("3C.3uC") - get("3C.3dC")).abs() <= 1e-9);
}

#[test]
fn threshold_must_exceed_one() {
    let p = CoverParams::canonical();
    let cases = build_catalog(&p);
    assert!(certify_cases(&p, &cases, 1.0, &SolveOptions::default()).is_err());
    assert!(certify_cases(&p, &cases, f64::NAN, &SolveOptions::default()).is_err());
}

#[test]
fn single_case_report() {
    let p = CoverParams::canonical();
    let case = find_case(&p, "3C.3uC").unwrap();
    let r = certify_cases(&p, &[case], DEFAULT_THRESHOLD, &SolveOptions::default()).unwrap();
    assert_eq!(r.cases.len(), 1);
    assert!((r.cases[0].min_length - 1.0001302).abs() <= 1e-6);
    assert!(r.summary().contains("3C.3uC"));
    assert!(find_case(&p, "nope").is_err());
}

#[test]
fn refining_the_binding_cases_does_not_help() {
    use arccover::catalog::case_lattice_refinements;
    use arccover::minimize_chain_length;
    let p = CoverParams::canonical();
    for name in ["3C.3uC", "3C.3dC"] {
        let parent = find_case(&p, name).unwrap();
        let v = minimize_chain_length(&parent.constraints, &SolveOptions::default()).unwrap().primal_value;
        let best = case_lattice_refinements(&parent, &p)
            .unwrap()
            .iter()
            .map(|c| minimize_chain_length(&c.constraints, &SolveOptions::default()).unwrap().primal_value)
            .fold(f64::INFINITY, f64::min);
        assert!((best - v).abs() <= 1e-6, "{name}: {best} vs {v}");
    }
    assert!(case_lattice_refinements(&find_case(&p, "2.2d").unwrap(), &p).is_err());
}
