//! Binary-level acceptance: reproducibility of `verify` reports across
//! worker counts (the remaining acceptance criterion), exit codes, and the
//! report schema.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entrovol"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("entrovol-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn acceptance_13_reports_identical_across_worker_counts() {
    let out1 = tmp("w1.json");
    let out8 = tmp("w8.json");
    let run = |workers: &str, out: &PathBuf| {
        let status = bin()
            .args([
                "verify", "--seed", "42", "--dim", "1,2", "--samples", "9000", "--inner-m", "64",
                "--workers", workers, "--out",
            ])
            .arg(out)
            .status()
            .expect("binary runs");
        assert!(status.success(), "verify exited nonzero with {workers} workers");
    };
    run("1", &out1);
    run("8", &out8);
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out8).unwrap();
    let identical = a == b;
    println!(
        "ACCEPTANCE 13 worker-count determinism   {} ({} bytes)",
        if identical { "PASS" } else { "FAIL" },
        a.len()
    );
    assert!(identical, "reports differ between 1 and 8 workers");
    let _ = std::fs::remove_file(&out1);
    let _ = std::fs::remove_file(&out8);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let out1 = tmp("r1.json");
    let out2 = tmp("r2.json");
    for out in [&out1, &out2] {
        let status = bin()
            .args([
                "verify", "--seed", "7", "--dim", "1", "--samples", "4000", "--inner-m", "32",
                "--out",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    let _ = std::fs::remove_file(&out1);
    let _ = std::fs::remove_file(&out2);
}

#[test]
fn dimension_cap_is_a_config_error() {
    let output = bin()
        .args(["verify", "--dim", "9", "--samples", "4000"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "expected exit 2 for --dim 9");
    let msg = String::from_utf8_lossy(&output.stderr);
    assert!(msg.contains("dimension"), "diagnostic should mention the dimension: {msg}");
}

#[test]
fn sweep_beta_below_hypothesis_floor_is_rejected() {
    let output = bin()
        .args(["verify", "--dim", "2", "--samples", "4000", "--betas", "3.0"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn report_schema_and_formats() {
    let out = tmp("schema.json");
    let status = bin()
        .args([
            "verify", "--seed", "5", "--dim", "1", "--samples", "4000", "--inner-m", "32",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert!(report["tool_version"].is_string());
    assert_eq!(report["root_seed"], 5);
    assert!(report["config_digest"].is_string());
    let results = report["results"].as_array().unwrap();
    assert!(!results.is_empty());
    for r in results {
        for key in ["name", "dim", "instance", "lhs", "rhs", "slack", "stderr", "verdict", "seed"] {
            assert!(!r[key].is_null(), "missing field {key} in {r}");
        }
    }
    let _ = std::fs::remove_file(&out);

    // CSV projection: fixed header, one line per record
    let output = bin()
        .args([
            "verify", "--seed", "5", "--dim", "1", "--samples", "4000", "--inner-m", "32",
            "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let csv = String::from_utf8(output.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "name,n,instance,lhs,rhs,slack,stderr,verdict,seed"
    );
    assert_eq!(lines.count(), results.len());
}

#[test]
fn entropy_command_examples() {
    // uniform cube of volume one: h = 0 analytically
    let output = bin()
        .args(["entropy", "--family", "uniform01", "--dim", "3"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("h = 0.000000"), "{text}");

    // pareto beta = 3, dim 1: h = 3/2 - ln 2 = 0.806853 (analytic)
    let output = bin()
        .args(["entropy", "--family", "pareto", "--beta", "3", "--dim", "1"])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("h = 0.806853"), "{text}");

    // sum of two uniform [0,1]: h = 1/2 within tolerance
    let output = bin()
        .args([
            "entropy", "--sum", "uniform01,uniform01", "--dim", "1", "--samples", "100000",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    let h: f64 = text
        .split("h(X+Y) = ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((h - 0.5).abs() < 0.03, "sum entropy {h}");

    // JSON density literal
    let output = bin()
        .args([
            "entropy",
            "--density-json",
            r#"{"type":"gaussian","mean":[0.0],"cov":[[1.0]]}"#,
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("1.418939"), "gaussian h: {text}"); // (1/2) ln(2 pi e)
}

#[test]
fn volume_command_examples() {
    let output = bin()
        .args(["volume", "--body", "ball", "--dim", "3", "--r", "1"])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    // 4 pi / 3 = 4.18879
    assert!(text.contains("4.18879"), "{text}");

    let output = bin()
        .args([
            "volume",
            "--body-json",
            r#"{"type":"zonotope","center":[0.0,0.0],"generators":[[1.0,0.0],[0.0,1.0],[1.0,1.0]]}"#,
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("3.0000"), "{text}");
}

#[test]
fn mposition_command_recovers_ellipse() {
    let output = bin()
        .args([
            "mposition", "--body", "ellipsoid", "--aspect", "10", "--dim", "2", "--budget",
            "300", "--samples", "4000",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let objective: f64 = text
        .split("= ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(objective >= 0.95, "mposition objective {objective}: {text}");
}

#[test]
fn counterexample_command_prints_monotone_table() {
    let output = bin()
        .args(["demo-counterexample", "--betas", "3,1.5", "--samples", "30000", "--inner-m", "64"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("pareto-pair beta=3"));
    assert!(text.contains("trend"), "{text}");
    assert!(text.contains("pass"), "{text}");
}
