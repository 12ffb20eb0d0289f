//! End-to-end runs of the command-line front end.

use std::path::PathBuf;

use ncpoisson::expr::{parse_tensor, render_tensor};
use ncpoisson::quiver::QuiverDoc;
use ncpoisson::report::{Report, Status};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("examples-data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv: Vec<&str> = std::iter::once("ncpoisson").chain(args.iter().copied()).collect();
    let code = ncpoisson_cli::run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json_report(args: &[&str], name: &str) -> (i32, serde_json::Value) {
    let path = std::env::temp_dir().join(format!("ncpoisson-{}-{name}.json", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let mut full = args.to_vec();
    full.extend(["--json", &p]);
    let (code, _) = run(&full);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn a3_bracket_and_moment_pass() {
    let (code, out) = run(&["verify-dpoisson", &data("a3.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS           double Jacobi (generators)"));
    assert!(out.contains("PASS           moment map"));
}

#[test]
fn trace_suite_passes_on_jordan() {
    let (code, out) = run(&["rep", &data("jordan.json"), "--dim", "2", "--check", "trace"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn corrupted_table_exits_one_with_witness() {
    let (code, out) = run(&["verify-dpoisson", &data("corrupted.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("witness <<a, a*, a*>> = -a # e(0) # e(0)"), "{out}");
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["verify-dpoisson", "/nonexistent/spec.json"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["rep", &data("a3.json"), "--dim", "1,2"]).0, 2);
    assert_eq!(run(&["cyclic-homology", &data("jordan.json"), "--window", "3..1"]).0, 2);
    assert_eq!(run(&["necklace", &data("jordan.json"), "--left", "a"]).0, 2);
    assert_eq!(run(&["necklace", &data("jordan.json"), "--left", "a.", "--right", "a"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn witnesses_round_trip_through_json() {
    let (code, doc) = json_report(&["verify-dpoisson", &data("corrupted.json")], "witness");
    assert_eq!(code, 1);
    let report: Report = serde_json::from_value(doc).unwrap();
    let qdoc = QuiverDoc::from_json(&std::fs::read_to_string(data("corrupted.json")).unwrap()).unwrap();
    let qbar = qdoc.quiver().unwrap().double(0).unwrap();
    let mut seen = 0;
    for check in report.checks.iter().filter(|c| c.status == Status::Fail) {
        assert!(!check.witnesses.is_empty());
        for w in check.witnesses.iter().filter(|w| w.arity >= 1) {
            let value = parse_tensor(&qbar, &w.value, w.arity).unwrap();
            assert_eq!(render_tensor(&qbar, &value), w.value);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let strip = |mut v: serde_json::Value| {
        for c in v["checks"].as_array_mut().unwrap() {
            c["elapsed_ms"] = 0.into();
        }
        v
    };
    let args = ["necklace", &data("a3.json"), "--seed", "7", "--samples", "30"];
    let (_, a) = json_report(&args, "det-a");
    let (_, b) = json_report(&args, "det-b");
    assert_eq!(strip(a), strip(b));
}

#[test]
fn cyclic_homology_writes_the_table() {
    let (code, doc) =
        json_report(&["cyclic-homology", &data("jordan.json"), "--lengths", "4", "--window", "0..1"], "hc");
    assert_eq!(code, 0);
    let dims: Vec<u64> = doc["homology"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["n"] == 0)
        .map(|e| e["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 3, 4, 6]);
}

#[test]
fn necklace_evaluation_is_printed() {
    let (code, out) = run(&["necklace", &data("jordan.json"), "--left", "a.a*", "--right", "a.a", "--samples", "10"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("{a.a*, a.a} = -2 a.a\n"), "{out}");
}

#[test]
fn remaining_suites_pass() {
    let cases: Vec<Vec<String>> = vec![
        vec!["mc-check".into(), data("a3.json")],
        vec!["reduce".into(), data("a3.json"), "--truncate".into(), "4".into(), "--samples".into(), "20".into()],
        vec!["extend".into(), data("jordan.json"), "--theta".into(), "inner".into(), "--samples".into(), "20".into()],
        vec!["rep".into(), data("a3.json"), "--dim".into(), "1".into(), "--check".into(), "cube".into(), "--samples".into(), "10".into()],
        vec!["hc-bracket".into(), data("a2.json"), "--algebra".into(), "preprojective".into(), "--lengths".into(), "4".into()],
        vec!["hc-bracket".into(), data("jordan.json"), "--lengths".into(), "6".into(), "--samples".into(), "20".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out) = run(&refs);
        assert_eq!(code, 0, "{args:?}\n{out}");
    }
}

#[test]
fn non_poisson_bivector_fails_mc_check() {
    let (code, out) = run(&["mc-check", &data("jordan.json"), "D(a).a.D(a*)"]);
    assert_eq!(code, 1, "{out}");
}
