//! End-to-end runs of the command line on the bundled documents.

use std::path::PathBuf;

use dgmorita_cli::{run, Outcome};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.cf")).display().to_string()
}

fn dgm(args: &[&str]) -> Outcome {
    run(std::iter::once("dgmorita").chain(args.iter().copied()))
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("dgmorita-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn every_fixture_validates() {
    for n in ["F1", "F2", "F3", "F4", "F5", "F6"] {
        let out = dgm(&["validate", &fixture(n)]);
        assert_eq!(out.code, 0, "{n}: {}", out.stdout);
    }
}

#[test]
fn perturbations_are_reported() {
    let out = dgm(&["--seed", "3", "validate", &fixture("F2"), "--perturb", "5"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(out.stdout.matches("perturbation ").count(), 5);
}

#[test]
fn cobar_report_doc_on_f4() {
    let out = dgm(&["--window", "0:8", "--format", "report-doc", "cobar", &fixture("F4"), "--comodule", "K", "--coring", "F"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let rows = doc["criteria"].as_array().unwrap();
    let h = rows.iter().find(|r| r["name"] == "interior homology").unwrap();
    assert_eq!(h["evidence"][1], "dims (1,1,1,1,1,1,1)");
    assert_eq!(doc["overall"], "pass");
}

#[test]
fn equivalence_report_on_f5() {
    let out = dgm(&["--window", "0:6", "report", "equivalence", &fixture("F5"), "--morphism", "phi_f", "--samples", "S1,S2"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("overall: PASS"));
}

#[test]
fn reports_pass_on_their_fixtures() {
    let out = dgm(&["report", "morita", &fixture("F3"), "--bimodule", "X", "--samples", "N1,N2,N3", "--reflection", "zero"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = dgm(&["report", "descent", &fixture("F5"), "--witness", "W", "--coring", "TA", "--samples", "S1,S2,S3"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = dgm(&["canonical-coring", &fixture("F5"), "--witness", "W", "--coring", "TA", "--compare", "D"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn failing_verdict_exits_one() {
    // The coaugmentation k → F4 is not a quasi-isomorphism.
    let out = dgm(&["report", "equivalence", &fixture("F4"), "--morphism", "coaug"]);
    assert_eq!(out.code, 1, "{} {}", out.stdout, out.stderr);
}

#[test]
fn emitted_documents_load() {
    let dir = std::env::temp_dir().join(format!("dgmorita-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("descent.cf");
    let out = dgm(&["descent-coring", &fixture("F5"), "--morphism", "phi", "--emit", target.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = dgm(&["validate", target.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn input_errors_exit_two() {
    let out = dgm(&["validate", &scratch("gf4.cf", "field GF(4);\n")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("modulus 4 is not prime"), "{}", out.stderr);

    let text = "field Q;\nmodule M { carrier Nope; }\n";
    let out = dgm(&["validate", &scratch("dangling.cf", text)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("`Nope`"), "{}", out.stderr);

    assert_eq!(dgm(&["frobnicate", &fixture("F1")]).code, 2);
    assert_eq!(dgm(&["tensor", &fixture("F1")]).code, 2);
    assert_eq!(dgm(&["homology", &fixture("F1"), "--complex", "missing"]).code, 2);
}

#[test]
fn broken_axioms_exit_one() {
    let text = "field Q;\ncomplex c { basis 1:0 t:0; }\nalgebra A { carrier c; unit (1, 1); mult (1, 1*1, 1) (t, 1*t, 1) (t, t*1, 2); }\n";
    let out = dgm(&["validate", &scratch("broken.cf", text)]);
    assert_eq!(out.code, 1, "{} {}", out.stdout, out.stderr);
    assert!(out.stdout.contains("[FAIL] A"), "{}", out.stdout);
}
