//! End-to-end runs of the command-line surface against temporary files.

use std::fs;
use std::path::PathBuf;

use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = supersolv_cli::run(args.iter().map(|s| s.to_string()), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn gen_file(dir: &TempDir, family: &str, n: &str) -> PathBuf {
    let path = dir.path().join(format!("{family}-{n}.cov"));
    let (code, _, err) = run(&["supersolv", "gen", family, n, "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0, "gen failed: {err}");
    path
}

#[test]
fn gen_then_certify_n5() {
    let dir = TempDir::new().unwrap();
    let n5 = gen_file(&dir, "n5", "0");
    let (code, out, _) = run(&["supersolv", "certify", "-f", n5.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.starts_with("verdict not_supersolvable\n"));
    assert!(out.contains("chain 0,1,2,4: cover 1<2 is a pentagon long side"));
    assert!(out.contains("chain 0,3,4: element 3 not left-modular"));
}

#[test]
fn certify_pi4_with_oracle() {
    let dir = TempDir::new().unwrap();
    let pi4 = gen_file(&dir, "partition", "4");
    let (code, out, _) = run(&[
        "supersolv",
        "certify",
        "-f",
        pi4.to_str().unwrap(),
        "--oracle",
        "--jobs",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict supersolvable"));
    assert!(out.contains("method both"));
    assert!(out.contains("chief_chain 14,4,1,0"));
}

#[test]
fn certify_structured_output() {
    let dir = TempDir::new().unwrap();
    let n5 = gen_file(&dir, "n5", "0");
    let (code, out, _) = run(&[
        "supersolv",
        "certify",
        "-f",
        n5.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["verdict"], "not_supersolvable");
    assert_eq!(doc["method"], "fast");
    assert!(doc["chief_chain"].is_null());
    assert_eq!(doc["failures"].as_array().unwrap().len(), 2);
    assert_eq!(doc["truncated"], false);
}

#[test]
fn verify_equiv_small() {
    let (code, out, _) = run(&["supersolv", "verify-equiv", "--max-size", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("n=5 candidates=1024 lattices=7"));
    assert!(out.contains("agreement on all lattices"));

    let (code, _, err) = run(&["supersolv", "verify-equiv", "--max-size", "8"]);
    assert_eq!(code, 2);
    assert!(err.contains("size guard"));
}

#[test]
fn check_chain_reports_conditions() {
    let dir = TempDir::new().unwrap();
    let b3 = gen_file(&dir, "boolean", "3");
    let (code, out, _) = run(&[
        "supersolv",
        "check-chain",
        "-f",
        b3.to_str().unwrap(),
        "--chain",
        "0,1,3,7",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("C1 chief true"));
    assert!(out.contains("C3 graded_left_modular true"));
    assert!(out.contains("C4 chain_modular true"));
    assert!(out.contains("C5 rank_modular true"));
    assert!(out.contains("agreement true"));

    let n5 = gen_file(&dir, "n5", "0");
    let (code, out, _) = run(&[
        "supersolv",
        "check-chain",
        "-f",
        n5.to_str().unwrap(),
        "--chain",
        "0,1,2,4",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("C1 chief false"));
    assert!(out.contains("VIOLATION op=right_chain_modular args=1,2,3"));
    assert!(out.contains("agreement true"));
}

#[test]
fn check_chain_input_errors() {
    let dir = TempDir::new().unwrap();
    let n5 = gen_file(&dir, "n5", "0");
    // Not increasing.
    let (code, _, err) = run(&[
        "supersolv",
        "check-chain",
        "-f",
        n5.to_str().unwrap(),
        "--chain",
        "0,3,1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not strictly increasing"));
    // Not maximal.
    let (code, _, err) = run(&[
        "supersolv",
        "check-chain",
        "-f",
        n5.to_str().unwrap(),
        "--chain",
        "0,1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not a maximal chain"));
}

#[test]
fn birkhoff_on_pi4() {
    let dir = TempDir::new().unwrap();
    let pi4 = gen_file(&dir, "partition", "4");
    let (code, out, _) = run(&[
        "supersolv",
        "birkhoff",
        "-f",
        pi4.to_str().unwrap(),
        "--mchain",
        "14,4,1,0",
        "--cchain",
        "14,7,5,0",
        "--max-r",
        "5",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("birkhoff identities hold"));
}

#[test]
fn birkhoff_precondition_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let n5 = gen_file(&dir, "n5", "0");
    let (code, _, err) = run(&[
        "supersolv",
        "birkhoff",
        "-f",
        n5.to_str().unwrap(),
        "--mchain",
        "0,3,4",
        "--cchain",
        "0,1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not chain-modular"));
}

#[test]
fn export_dot_with_pentagons_and_chain() {
    let dir = TempDir::new().unwrap();
    let n5 = gen_file(&dir, "n5", "0");
    let out_path = dir.path().join("n5.dot");
    let (code, _, _) = run(&[
        "supersolv",
        "export-dot",
        "-f",
        n5.to_str().unwrap(),
        "--chain",
        "0,1,2,4",
        "--pentagons",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let dot = fs::read_to_string(&out_path).unwrap();
    assert!(dot.starts_with("digraph lattice {"));
    assert_eq!(dot.matches("fontcolor=red").count(), 3);
    assert_eq!(dot.matches("penwidth").count(), 3);
}

#[test]
fn strict_mode_rejects_redundant_edges() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("chain.cov");
    fs::write(&path, "n 3\n0 1\n1 2\n0 2\n").unwrap();
    let (code, _, _) = run(&["supersolv", "certify", "-f", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, err) = run(&[
        "supersolv",
        "certify",
        "-f",
        path.to_str().unwrap(),
        "--strict",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not a cover relation"));
}

#[test]
fn missing_file_is_an_input_error() {
    let (code, _, err) = run(&["supersolv", "certify", "-f", "/nonexistent/x.cov"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
}

#[test]
fn gen_round_trips_through_certify() {
    let dir = TempDir::new().unwrap();
    for (family, n, expect) in [
        ("boolean", "4", 0),
        ("chain", "5", 0),
        ("divisor", "60", 0),
        ("noncrossing_partition", "4", 0),
        ("m3", "0", 0),
        ("n5", "0", 1),
    ] {
        let path = gen_file(&dir, family, n);
        let (code, _, err) = run(&["supersolv", "certify", "-f", path.to_str().unwrap()]);
        assert_eq!(code, expect, "{family} {n}: {err}");
    }
}
