//! Command-line interface tests, run against the built binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_openbook"))
}

#[test]
fn fdtc_of_10_153_prints_zero() {
    let out = bin()
        .args(["fdtc", "--knot", "10_153"])
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("fdtc(10_153) = 0"), "{text}");
}

#[test]
fn starved_iteration_budget_exits_indeterminate() {
    let out = bin()
        .args([
            "fdtc",
            "--knot",
            "10_153",
            "--max-iter",
            "1",
            "--denom-bound",
            "1000",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("indeterminate"), "{text}");
}

#[test]
fn unknown_subcommand_exits_one() {
    let out = bin().arg("frobnicate").output().expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_knot_exits_one() {
    let out = bin()
        .args(["fdtc", "--knot", "99_999"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("99_999"), "{text}");
}

#[test]
fn veer_reports_witnesses() {
    let out = bin()
        .args(["veer", "--knot", "4_1"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("neither"), "{text}");
    assert!(text.contains("witness"), "{text}");
}

#[test]
fn classify_trefoil_is_periodic() {
    let out = bin()
        .args(["classify", "--knot", "3_1"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("m^6 = T^1"), "{text}");
    assert!(text.contains("periodic"), "{text}");
}

#[test]
fn certificate_is_written_and_replayable() {
    let dir = std::env::temp_dir().join("openbook-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path1 = dir.join("cert1.json");
    let path2 = dir.join("cert2.json");
    for path in [&path1, &path2] {
        let out = bin()
            .args(["fdtc", "--knot", "3_1", "--out", path.to_str().unwrap()])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
    }
    let a = std::fs::read_to_string(&path1).unwrap();
    let b = std::fs::read_to_string(&path2).unwrap();
    assert_eq!(a, b, "identical runs produce identical certificate bytes");
    assert!(a.contains("\"value\": \"1/6\""), "{a}");
}

#[test]
fn validate_builtin_catalog() {
    let out = bin().arg("validate").output().expect("binary runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["3_1", "m3_1", "4_1", "10_153"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn paper_demo_writes_certificate() {
    let dir = std::env::temp_dir().join("openbook-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("demo.json");
    let out = bin()
        .args([
            "paper-demo",
            "--knot",
            "4_1",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("all stages check out"), "{text}");
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("\"stages\""), "{body}");
}

#[test]
fn certify_all_concurrent() {
    let out = bin()
        .args(["certify", "--all"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["3_1", "m3_1", "4_1", "10_153"] {
        assert!(text.contains(name), "{text}");
    }
}
