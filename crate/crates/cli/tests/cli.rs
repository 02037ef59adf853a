use std::fs;
use std::process::{Command, Output};

use arccover::certify::{CertificationReport, Verdict};
use arccover::constraint::ConstraintSystem;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arccover")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn certify_all_succeeds_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["certify", "--all", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("verdict certified"));
    let rep = CertificationReport::from_json_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(rep.verdict, Verdict::Certified);
    assert_eq!(rep.cases.len(), 20);
}

#[test]
fn single_case_prints_seven_decimals() {
    let o = run(&["certify", "--case", "3C.3uC"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("min 1.0001302"));
}

#[test]
fn high_threshold_fails_the_verdict() {
    assert_eq!(code(&run(&["certify", "--threshold", "1.1"])), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["certify", "--case", "no-such-case"])), 2);
    assert_eq!(code(&run(&["certify", "--case", "2.2d", "--all"])), 2);
    assert_eq!(code(&run(&["certify", "--threshold", "0.5"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["search", "--config", "/nonexistent/config.json"])), 2);
}

#[test]
fn params_file_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("rect.json");
    fs::write(&good, r#"{"s": 0, "t": 0, "s2": 0}"#).unwrap();
    let o = run(&["--params", good.to_str().unwrap(), "certify"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("area 0.1227368"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"s": 0.1, "t": 0.1, "s2": 0.05, "extra": 1}"#).unwrap();
    assert_eq!(code(&run(&["--params", bad.to_str().unwrap(), "certify"])), 2);
    fs::write(&bad, "not json").unwrap();
    assert_eq!(code(&run(&["--params", bad.to_str().unwrap(), "certify"])), 2);
}

#[test]
fn svg_figures_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["certify", "--case", "2.2d", "--svg", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let svg = fs::read_to_string(dir.path().join("2.2d.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn dump_constraints_emits_a_system() {
    let o = run(&["dump-constraints", "--case", "1.2uC"]);
    assert_eq!(code(&o), 0);
    let sys = ConstraintSystem::from_json_str(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(!sys.is_empty());
}

#[test]
fn sample_places_every_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sample", "--curves", "200", "--seed", "4", "--failures", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("placed 200 of 200"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    assert_eq!(code(&run(&["sample", "--curves", "5", "--seed", "1", "--angles", "10"])), 2);
}

#[test]
fn search_with_small_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"threshold": 1.00001, "s": {"min": 0.12, "max": 0.16}, "t": {"min": 0.12, "max": 0.16},
            "s2": {"min": 0, "max": 0}, "points": 3, "levels": 1}"#,
    )
    .unwrap();
    let trace = dir.path().join("trace.csv");
    let out = dir.path().join("best.json");
    let o = run(&[
        "search",
        "--config",
        cfg.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("best s "));
    assert!(fs::read_to_string(trace).unwrap().starts_with("level,"));
    assert_eq!(CertificationReport::from_json_str(&fs::read_to_string(out).unwrap()).unwrap().verdict, Verdict::Certified);

    let o = run(&["search", "--config", cfg.to_str().unwrap(), "--threshold", "1.3"]);
    assert_eq!(code(&o), 1);
}
