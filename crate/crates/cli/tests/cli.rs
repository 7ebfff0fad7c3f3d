use std::process::{Command, Output};

use serde_json::Value;

fn sweil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sweil")).args(args).arg("-q").output().expect("run sweil")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

fn checks(v: &Value) -> Vec<(String, String)> {
    v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["check"].as_str().unwrap().to_string(), r["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn sca_tables_pass_with_empty_diff() {
    let out = sweil(&["sca-tables", "--alpha", "1/2", "--window", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(checks(&v).iter().all(|(_, s)| s == "pass"));
    assert!(checks(&v).iter().any(|(c, _)| c == "vf-oracle"));
    assert_eq!(v["summary"]["status"], "pass");
}

#[test]
fn abelian_relative_cohomology_csv() {
    let out = sweil(&["cohomology", "--backend", "loop:abelian:1", "--rel", "--emax", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E,DegS,DegLambda,dim,rank_in,rank_out,coh_dim,gram_signature,harmonic_dim"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[3], f[6], "{line}");
        rows += 1;
    }
    assert!(rows > 0);
}

#[test]
fn s2alpha_summary_lists_the_central_charge() {
    let out = sweil(&[
        "verify-s2a", "--backend", "loop:abelian:1", "--alpha", "0", "--emax", "2", "--b0max", "1", "--window", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"]["central_charge"], "3");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify-chain", "--backend", "loop:e8"][..],
        &["verify-chain", "--format", "xml"],
        &["frobnicate"],
        &["sca-tables", "--jobs", "0"],
        &["sca-tables", "--alpha", "one"],
        &["kahler", "--backend", "fmu:0:0"],
        &[],
    ] {
        assert_eq!(sweil(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_checks_exit_one_with_witnesses() {
    let out = sweil(&["kahler", "--emax", "2", "--b0max", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let adj = v["reports"].as_array().unwrap().iter().find(|r| r["check"] == "kahler-adjoint").unwrap();
    assert_eq!(adj["status"], "fail");
    assert!(adj["witness"]["lhs"].is_string());
    assert_eq!(v["summary"]["status"], "fail");
}

#[test]
fn config_file_with_flag_override() {
    let path = std::env::temp_dir().join(format!("sweil-{}.conf", std::process::id()));
    std::fs::write(&path, "# sca run\nmode = sca-tables\nalpha = 1/2\nwindow = 1\nformat = text\n").unwrap();
    let out = sweil(&["--config", path.to_str().unwrap(), "--window", "2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS vf-oracle [|n|<=2]"), "{text}");
    assert!(text.contains("alpha = 1/2"));
}

#[test]
fn output_does_not_depend_on_jobs() {
    let args = ["verify-relative", "--emax", "2", "--b0max", "1", "--window", "1"];
    let a = sweil(&[&args[..], &["--jobs", "1"]].concat());
    let b = sweil(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let out = sweil(&["sca-tables", "--window", "1"]);
    assert!(!String::from_utf8_lossy(&out.stdout).contains("millis"));
    let out = sweil(&["sca-tables", "--window", "1", "--timing"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("millis"));
}
