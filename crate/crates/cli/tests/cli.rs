//! End-to-end checks of the binary: exit codes, file outputs, determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn gbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("gbeta-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn criterion_worked_instance_exits_zero() {
    let out = gbeta(&["criterion", "--m", "3,1,-1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PCF"));
    assert!(stdout.contains("z^3 - 3z^2 - z + 1"));
}

#[test]
fn criterion_hypothesis_violation_exits_two() {
    let out = gbeta(&["criterion", "--m", "2,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn expand_golden_json() {
    let out = gbeta(&[
        "expand",
        "--beta-poly",
        "-1,-1,1",
        "--beta-lo",
        "1",
        "--beta-hi",
        "2",
        "--signs",
        "1,1",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["shape"], "periodic");
    assert_eq!(v["period"], 2);
}

#[test]
fn scan_is_deterministic_and_renders() {
    let csv1 = tmp("scan1.csv");
    let csv2 = tmp("scan2.csv");
    let svg = tmp("scan.svg");
    for (path, with_svg) in [(&csv1, true), (&csv2, false)] {
        let mut args = vec![
            "scan",
            "--samples",
            "25",
            "--seed",
            "11",
            "--bound",
            "8",
            "--n-lo",
            "2",
            "--n-hi",
            "4",
            "--out",
        ];
        args.push(path.to_str().unwrap());
        let svg_s = svg.to_str().unwrap().to_string();
        if with_svg {
            args.push("--svg");
            args.push(&svg_s);
        }
        let out = gbeta(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(&csv1).unwrap();
    let b = fs::read(&csv2).unwrap();
    assert_eq!(a, b, "scan output differs between identical invocations");
    assert!(fs::read_to_string(&svg).unwrap().contains("<svg"));

    // re-render the CSV
    let svg2 = tmp("rescan.svg");
    let out = gbeta(&[
        "render",
        "--input",
        csv1.to_str().unwrap(),
        "--out",
        svg2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&svg).unwrap(), fs::read(&svg2).unwrap());
    for p in [csv1, csv2, svg, svg2] {
        let _ = fs::remove_file(p);
    }
}

#[test]
fn boundary_writes_curve_csv() {
    let csv = tmp("curve.csv");
    let out = gbeta(&[
        "boundary",
        "--grid",
        "0.7:2.5:0.6",
        "--trunc",
        "200",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("phi,lambda,alpha,residual,n_trunc\n"));
    assert_eq!(text.lines().count(), 5);
    let _ = fs::remove_file(csv);
}

#[test]
fn unimodal_tent_cross_checks() {
    let map = tmp("tent.json");
    fs::write(
        &map,
        r#"{"breakpoints":["0","1/2","1"],"values":["0","1","0"]}"#,
    )
    .unwrap();
    let out = gbeta(&[
        "unimodal",
        "--map",
        map.to_str().unwrap(),
        "--n-max",
        "10",
        "--json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["case"], 1);
    assert_eq!(v["entropy"]["gap"], 0.0);
    let _ = fs::remove_file(map);
}

#[test]
fn verify_criterion_suite_deterministic() {
    let a = gbeta(&["verify", "--suite", "criterion"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    let b = gbeta(&["verify", "--suite", "criterion"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("result criterion: PASS"));
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let out = gbeta(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
