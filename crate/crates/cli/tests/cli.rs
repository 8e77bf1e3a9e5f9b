use std::path::PathBuf;
use std::process::{Command, Output};

fn solvext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solvext")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn verify_builtin_real_passes_with_sixteen_g52_entries() {
    let json = tmp("builtin_r.json");
    let o = solvext(&["verify", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("g5,2: 16 entries"), "{out}");
    assert!(out.contains("g1+g4: 12 entries"), "{out}");
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(text.contains("\"id\": \"g52\""));
    assert!(!text.contains("millis"));
}

#[test]
fn verify_builtin_complex_skips_real_only_rows() {
    let o = solvext(&["verify", "--field", "C"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("g5,2: 12 entries"));
}

#[test]
fn json_report_is_byte_identical_across_runs() {
    let (a, b) = (tmp("det_a.json"), tmp("det_b.json"));
    for p in [&a, &b] {
        let o = solvext(&["verify", "--samples", "3", "--seed", "7", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn broken_entry_exits_one_and_names_the_jacobi_triple() {
    let o = solvext(&["verify", "--catalog", &fixture("mixed.cat")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL BAD.L1"), "{out}");
    assert!(out.contains("Jacobi fails on (X, X1, X3)"), "{out}");
    assert!(!out.contains("FAIL GOOD.L1"));
}

#[test]
fn passing_fixture_exits_zero() {
    let o = solvext(&["verify", "--catalog", &fixture("good.cat")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn timings_flag_adds_millis() {
    let json = tmp("timed.json");
    let o = solvext(&["verify", "--catalog", &fixture("good.cat"), "--timings", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&json).unwrap().contains("\"millis\""));
}

#[test]
fn parse_errors_exit_two() {
    let o = solvext(&["parse", &fixture("four_slots.cat")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    let o = solvext(&["verify", "--catalog", &fixture("four_slots.cat")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_builtin_round_trips() {
    let o = solvext(&["parse", "builtin"]);
    assert_eq!(o.status.code(), Some(0));
    let printed = stdout(&o);
    assert!(printed.contains("S(0, 1)"));
    let path = tmp("echo.cat");
    std::fs::write(&path, &printed).unwrap();
    let again = solvext(&["parse", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), printed);
}

#[test]
fn fingerprint_outputs() {
    let out = stdout(&solvext(&["fingerprint", "T3.L2"]));
    assert!(out.contains("derived series dims: [7, 4, 1, 0]"), "{out}");
    let out = stdout(&solvext(&["fingerprint", "abelian7"]));
    assert!(out.contains("center dim: 7"), "{out}");
    let out = stdout(&solvext(&["fingerprint", "T4.L1"]));
    assert!(out.contains("nilradical lower central series dims: [5, 3, 2, 0]"), "{out}");
}

#[test]
fn unknown_reference_exits_two() {
    let o = solvext(&["fingerprint", "T9.L1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn iso_with_certificate() {
    let cert = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/certs/t3_l1.cert");
    let o = solvext(&["iso", "T3.L1@s=2", "T3.L1@s=1", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("isomorphic (certificate verified)"));
}

#[test]
fn iso_refutes_by_derived_series() {
    let o = solvext(&["iso", "T3.L2", "T3.L3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("refuted: derived series dims"));
}

#[test]
fn iso_same_algebra_twice() {
    let o = solvext(&["iso", "T3.L4@a=2,b=3", "T3.L4@a=2,b=3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("isomorphic"));
}

#[test]
fn wrong_certificate_is_reported() {
    let o = solvext(&["iso", "T3.L4@a=1,b=2", "T3.L4@a=-1/2,b=1/2", "--certificate", &fixture("identity7.cert")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("certificate failed"));
}
