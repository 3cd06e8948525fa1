use std::process::Command;

use serde_json::Value;

fn jpst(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_jpst")).args(args).output().expect("run jpst");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--no-timestamp"];
    full.extend_from_slice(args);
    let (text, code) = jpst(&full);
    (serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")), code)
}

#[test]
fn output_is_deterministic() {
    let args = ["--no-timestamp", "construct", "--k", "4", "--m", "4", "--c", "1,1,2,1", "--tau", "pi/2"];
    assert_eq!(jpst(&args), jpst(&args));
}

#[test]
fn timestamp_present_by_default() {
    let (text, code) = jpst(&["verify-j62"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["timestamp"].is_u64());
    assert_eq!(v["provenance"]["library"], "johnson-pst");
}

#[test]
fn constructed_weights_round_trip() {
    let (v, code) = json(&["construct", "--k", "5", "--m", "4", "--c", "3,1,0,-1", "--tau", "3*pi/4"]);
    assert_eq!(code, 0);
    let weights = serde_json::to_string(&v["outputs"]["weights"]).unwrap();
    let (check, code) = json(&["check", "--k", "5", "--weights", &weights, "--tau", "3pi/4"]);
    assert_eq!(code, 0);
    assert_eq!(check["outputs"]["certificate"]["verdict"], true);
    assert_eq!(check["outputs"]["certificate"]["time"]["tau"], "3*pi/4");

    let (earliest, _) = json(&["check", "--k", "5", "--weights", &weights]);
    assert_eq!(earliest["outputs"]["pst"], true);
    assert_eq!(earliest["outputs"]["minimal_time"]["tau"], "3*pi/4");
}

#[test]
fn check_reports_failing_index() {
    let (v, code) = json(&["check", "--k", "2", "--weights", "0,1", "--tau", "pi"]);
    assert_eq!(code, 0);
    let cert = &v["outputs"]["certificate"];
    assert_eq!(cert["verdict"], false);
    assert!(cert["failing_s"].is_u64());
}

#[test]
fn error_exit_codes() {
    let (v, code) = json(&["construct", "--k", "4", "--m", "3", "--c", "1,1,1"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("obstruction")));
    let (v, code) = json(&["construct", "--k", "4", "--m", "4", "--c", "1,1,1,1"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("parity_pattern")));
    let (_, code) = json(&["check", "--k", "3", "--selector", "[1]", "--tau", "0.5"]);
    assert_eq!(code, 2);
    let (v, code) = json(&["oracle", "--k", "8", "--selector", "[8]", "--tau", "pi"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (3, Some("capacity")));
    let (_, code) = jpst(&["construct", "--k"]);
    assert_eq!(code, 2);
}

#[test]
fn pi2_modes() {
    let (v, _) = json(&["pi2", "--k", "6", "--enumerate"]);
    assert_eq!(v["outputs"]["count"], 8);
    assert!(v["outputs"]["selectors"].as_array().unwrap().iter().all(|s| s["pst_at_half_pi"] == true));
    let (v, _) = json(&["pi2", "--k", "3", "--from-T", "1,2"]);
    assert_eq!(v["outputs"]["selectors"][0]["selector"], serde_json::json!([1, 2]));
    let (a, _) = json(&["pi2", "--k", "40", "--sample", "5", "--seed", "9"]);
    let (b, _) = json(&["pi2", "--k", "40", "--sample", "5", "--seed", "9"]);
    assert_eq!(a, b);
    assert_eq!(a["outputs"]["count"], 5);
}

#[test]
fn search_cross_checks() {
    let (v, code) = json(&["search", "--k", "8", "--h", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["count"], 16);
    assert_eq!(v["outputs"]["cross_check"]["agrees"], true);
    let (seq, _) = json(&["--threads", "1", "search", "--k", "10", "--h", "1"]);
    let (par, _) = json(&["--threads", "2", "search", "--k", "10", "--h", "1"]);
    assert_eq!(seq["outputs"], par["outputs"]);
}

#[test]
fn j62_passes() {
    let (v, code) = json(&["verify-j62"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["result"], "PASS");
    assert_eq!(v["outputs"]["union"]["certificate"]["time"]["tau"], "pi/4");
}

#[test]
fn csv_outputs() {
    let (text, _) = jpst(&["--csv", "figure1", "--k-list", "12,16"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,r,w_r,log10_w_r,w_r_exact,inexact"));
    assert_eq!(lines.count(), 28);
    let (text, _) = jpst(&["--csv", "oracle", "--k", "2", "--weights", "0,2/3,1/6", "--tau", "pi", "--grid", "0:2:5"]);
    assert_eq!(text.lines().next(), Some("t_over_pi,fidelity"));
    assert_eq!(text.lines().count(), 6);
    let (text, _) = jpst(&["--csv", "eigentable", "--k", "2"]);
    assert_eq!(text, "r,s=0,s=1,s=2\n0,1,1,1\n1,4,0,-2\n2,1,-1,1\n");
}

#[test]
fn oracle_agrees_with_exact_verdict() {
    let (v, code) = json(&["oracle", "--k", "3", "--selector", "[1,2]", "--tau", "pi/2"]);
    assert_eq!(code, 0);
    let report = &v["outputs"]["report"];
    assert_eq!(report["pst"], true);
    assert!(report["fidelity"].as_f64().unwrap() > 1.0 - 1e-9);
    assert_eq!(report["pair"], serde_json::json!([[1, 2, 3], [4, 5, 6]]));
}
