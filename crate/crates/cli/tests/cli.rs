use std::fs;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

fn qzeros(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qzeros")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn jacobi(n: &str) -> Vec<&str> {
    vec!["--family", "little-q-jacobi", "--n", n, "--q", "1/2", "--a", "1/2", "--b", "-1"]
}

#[test]
fn coeffs_of_first_jacobi_polynomial() {
    let out = qzeros(&["coeffs", "--family", "little-q-jacobi", "--n", "1", "--q", "1/2", "--a", "1/2", "--b", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1, -5/4");
}

#[test]
fn constant_bessel_has_no_roots() {
    let out = qzeros(&["roots", "--family", "q-bessel", "--n", "0", "--q", "1/2", "--b", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["roots"].as_array().unwrap().len(), 0);
    assert_eq!(v["degree"], 0);
}

#[test]
fn printed_rationals_reparse() {
    let mut args = vec!["roots"];
    args.extend(jacobi("4"));
    let out = qzeros(&args);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 4);
    for r in roots {
        for key in ["lo", "hi", "errorBound"] {
            let text = r[key].as_str().unwrap();
            let parsed: BigRational = text.parse().unwrap();
            assert_eq!(parsed.to_string(), text);
        }
        let lo: BigRational = r["lo"].as_str().unwrap().parse().unwrap();
        let hi: BigRational = r["hi"].as_str().unwrap().parse().unwrap();
        assert!(lo < hi && lo > BigRational::from_integer(BigInt::from(0)));
    }
    let coeffs = qzeros(&[&["coeffs"][..], &jacobi("3")].concat());
    for c in stdout(&coeffs).trim().split(", ") {
        let parsed: BigRational = c.parse().unwrap();
        assert_eq!(parsed.to_string(), c);
    }
}

#[test]
fn lmesh_decided_below_q() {
    let out = qzeros(&[&["lmesh"][..], &jacobi("3")].concat());
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["versusQ"], "less");
    assert_eq!(v["threshold"], "1/2");
}

#[test]
fn interlace_consecutive_degrees() {
    let out = qzeros(&[
        "interlace",
        "--p",
        "little-q-jacobi:n=3,q=1/2,a=1/2,b=-1",
        "--r",
        "little-q-jacobi:n=2,q=1/2,a=1/2,b=-1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["relation"], "StrictInterlace");
}

#[test]
fn verify_regime_grid_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    let report = dir.path().join("report.json");
    fs::write(
        &config,
        r#"{"qValues":["1/4","1/2"],"nValues":[2,3],"aValues":["1/2","1"],"bValues":["-1","1/3"],
            "eps":"1/1000000","checkIds":["thm2-lmesh","thmA-1","contig-1"]}"#,
    )
    .unwrap();
    let out = qzeros(&["verify", "--config", config.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    // 2 q x 2 n x 2 a x 2 b points, 3 checks
    assert_eq!(v["records"].as_array().unwrap().len(), 16 * 3);
    assert_eq!(v["summary"]["total"], 48);
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["records"][0]["checkId"], "thm2-lmesh");
    assert_eq!(v["records"][0]["params"]["q"], "1/4");
}

#[test]
fn verify_reports_fail_with_status_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    // the limit deviation at m = 20 is far above this tolerance
    fs::write(&config, r#"{"qValues":["1/2"],"nValues":[2],"aValues":["1/2"],"bValues":["-1"],"eps":"1/1000000000000000000000000000000000000000","checkIds":["bessel-limit"]}"#).unwrap();
    let out = qzeros(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let out = qzeros(&["coeffs", "--family", "little-q-jacobi", "--n", "1", "--q", "1/x", "--a", "1/2", "--b", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed rational"));
    let out = qzeros(&["coeffs", "--family", "little-q-jacobi", "--n", "1", "--q", "3/2", "--a", "1/2", "--b", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qzeros(&["coeffs", "--family", "no-such-family", "--n", "1", "--q", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qzeros(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_check_in_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    fs::write(&config, r#"{"qValues":["1/2"],"nValues":[2],"aValues":["1/2"],"bValues":["-1"],"eps":"1/1000","checkIds":["no-such-check"]}"#).unwrap();
    let out = qzeros(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_one_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let mut args = vec!["sweep"];
    args.extend(jacobi("3"));
    args.extend(["--param", "b", "--from", "-2", "--to", "0", "--steps", "4", "--out", csv.to_str().unwrap()]);
    let out = qzeros(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,param_decimal,lambda_1,lambda_2,lambda_3,error_bound");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("-2,"));
    assert!(lines[5].starts_with("0,"));
}

#[test]
fn table1_rows_pass() {
    let out = qzeros(&["table1", "--rows", "1,8", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("row 8: 3/3 pass"));
}
