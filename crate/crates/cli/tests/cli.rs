use std::path::PathBuf;
use std::process::{Command, Output};

use coxsplit_cli::{emit_report, Mode, Report};
use serde_json::Value;

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn system(name: &str) -> String {
    workspace().join("systems").join(name).display().to_string()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn coxsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxsplit"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn payload(out: &Output) -> Value {
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    report.payload
}

#[test]
fn certify_triangle_pair() {
    let out = coxsplit(&["certify", &system("triangle333.cox"), "--subset", "0,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&out)["overall"], "certified");
}

#[test]
fn golden_reports() {
    let out = coxsplit(&["certify", &system("triangle333.cox"), "--subset", "0", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("certify_triangle_rejected.json"));

    let out = coxsplit(&["certify", &system("triangle333.cox"), "--subset", "0"]);
    assert_eq!(stdout(&out), golden("certify_triangle_rejected.txt"));
    assert!(stdout(&out).contains("first failing condition: MAXIMALITY"));

    let out = coxsplit(&["reduce", &system("dihedral_inf.cox"), "--word", "s t s t", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("reduce_dihedral.json"));
    assert_eq!(payload(&out)["normal_form"], "s t s t");

    let out = coxsplit(&["quotients", &system("dihedral_inf.cox"), "--max-degree", "3", "--json"]);
    assert_eq!(stdout(&out), golden("quotients_dihedral.json"));
}

#[test]
fn json_reports_are_canonical() {
    for args in [
        vec!["analyze", "f4.cox"],
        vec!["certify", "universal3.cox"],
        vec![
            "separate",
            "universal3.cox",
            "--word",
            "s1 s2 s1 s3",
            "--max-degree",
            "4",
        ],
    ] {
        let mut full: Vec<String> = args.iter().map(|a| a.to_string()).collect();
        full[1] = system(args[1]);
        full.push("--json".into());
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let out = coxsplit(&refs);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let report: Report = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(emit_report(&report, Mode::Json), stdout(&out));
    }
}

#[test]
fn separation_report() {
    let out = coxsplit(&[
        "separate",
        &system("universal3.cox"),
        "--word",
        "s1 s2 s1 s3",
        "--max-degree",
        "4",
        "--json",
    ]);
    let p = payload(&out);
    assert_eq!(p["found"], true);
    assert_ne!(p["image"], "()");
    let out = coxsplit(&["separate", &system("dihedral_inf.cox"), "--word", "s s"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_path = cert.display().to_string();
    let out = coxsplit(&[
        "certify",
        &system("triangle333.cox"),
        "--subset",
        "0,1",
        "--json",
        "--output",
        &cert_path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "--output must not also print the report");

    let out = coxsplit(&["verify", &system("triangle333.cox"), &cert_path, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&out)["valid"], true);

    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, text.replace(r#""nullity":0"#, r#""nullity":1"#)).unwrap();
    let out = coxsplit(&[
        "verify",
        &system("triangle333.cox"),
        &tampered.display().to_string(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["valid"], false);
    assert!(p["reason"].as_str().unwrap().contains("UNIQUE_FIXED_POINT"));

    let out = coxsplit(&["verify", &system("affine_b2.cox"), &cert_path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("certificate was issued for system"));
}

#[test]
fn exit_codes() {
    assert_eq!(coxsplit(&[]).status.code(), Some(2));
    assert_eq!(coxsplit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        coxsplit(&["certify", &system("triangle333.cox"), "--subset", "0,7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        coxsplit(&["reduce", &system("a3.cox"), "--word", "s1 x"]).status.code(),
        Some(2)
    );
    assert_eq!(coxsplit(&["analyze", "does-not-exist.cox"]).status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("asym.cox", "rank 2\n1 3\n4 1\n"),
        ("diag.cox", "rank 2\n2 3\n3 1\n"),
        ("small.cox", "rank 2\n1 1\n1 1\n"),
        ("short.cox", "rank 3\n1 3 2\n3 1 3\n"),
        ("junk.cox", "rank 2\n1 x\nx 1\n"),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let out = coxsplit(&["analyze", &path.display().to_string()]);
        assert_eq!(out.status.code(), Some(3), "{name}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn internal_faults_map_to_exit_four() {
    let e = coxsplit_cli::CliError::from(coxsplit_core::Error::Consistency("routes disagree".into()));
    assert_eq!(e.exit_code(), 4);
}
