use std::process::{Command, Output};

use serde_json::Value;

fn gbern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbern"))
        .args(args)
        .env_remove("GBERN_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = gbern(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn classical_numbers() {
    let v = json(&["numbers", "--m", "1", "--nmax", "4"]);
    assert_eq!(v["m"], 1);
    assert_eq!(v["numbers"], serde_json::json!(["1", "-1/2", "1/6", "0", "-1/30"]));
}

#[test]
fn polynomial_coefficients() {
    let v = json(&["poly", "--m", "2", "--n", "2"]);
    assert_eq!(v["coeffs"], serde_json::json!(["1/9", "-4/3", "2"]));
}

#[test]
fn zeta_two_from_midpoint() {
    let v = json(&["zeta-even", "--r", "1", "--m", "2", "--via", "peri12"]);
    assert_eq!(v["q"], "1/6");
    assert!(v["decimal"].as_str().unwrap().starts_with("1.6449340668"));
    let out = gbern(&["zeta-even", "--r", "2", "--via", "peri12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zeta_even_routes_agree() {
    for via in ["htyq1", "euler"] {
        let v = json(&["zeta-even", "--r", "3", "--m", "4", "--via", via]);
        assert_eq!(v["q"], "1/945");
    }
}

#[test]
fn zeta_three_estimate() {
    let v = json(&["zeta-odd", "--s", "3", "--m", "5", "--r", "2", "--p", "100", "--digits", "40"]);
    let value = v["value"].as_str().unwrap();
    assert!(value.starts_with("1.2020569031595942853997381615114499"), "{value}");
    let bound: f64 = v["error_bound"].as_str().unwrap().parse().unwrap();
    assert!(bound < 1e-30);
    for key in ["integral_tail", "partial_sum", "sigma_tilde", "sigma_inf", "e_tail", "delta_tail"] {
        assert!(v["components"][key].is_string(), "{key}");
    }
    assert_eq!(v["verdict"], "both_converge");
}

#[test]
fn exact_evaluation() {
    let v = json(&["eval", "--m", "2", "--n", "3", "--x", "-1/3", "--periodic"]);
    assert_eq!(v["value"], "-7/810");
    let v = json(&["eval", "--m", "1", "--n", "2", "--x", "0.5"]);
    assert_eq!(v["value"], "-1/12");
}

#[test]
fn fourier_output_shape() {
    let v = json(&["fourier", "--m", "2", "--n", "2", "--K", "4", "--at", "0.25"]);
    assert_eq!(v["a"].as_array().unwrap().len(), 4);
    assert_eq!(v["b"].as_array().unwrap().len(), 4);
    assert_eq!(v["a0"], "1/9");
    assert_eq!(v["K"], 4);
    assert!(v["at"]["partial_sum"].is_string());
}

#[test]
fn quadrature_report() {
    let v = json(&["quad", "--f", "exp", "--a", "0", "--b", "1", "--nsub", "4", "--m", "2", "--r", "3"]);
    for key in ["main_sum", "remainder", "remainder_bound", "total"] {
        assert!(v[key].is_string(), "{key}");
    }
    assert!(v["total"].as_str().unwrap().starts_with("1.71828182845904523536028747135"));
    let v = json(&["quad", "--f", "power:3", "--a", "1", "--b", "2", "--nsub", "4", "--m", "3", "--r", "4"]);
    assert!(v["total"].as_str().unwrap().starts_with("0.375"));
    assert_eq!(gbern(&["quad", "--f", "sin", "--a", "0", "--b", "1", "--nsub", "4", "--m", "2", "--r", "2"]).status.code(), Some(2));
}

#[test]
fn norms_are_exact() {
    let v = json(&["norms", "--m", "1", "--n", "1"]);
    assert_eq!(v["l2_norm_sq"], "1/12");
    assert_eq!(v["mean"], "0");
}

#[test]
fn plot_export_formats() {
    let out = gbern(&["export-plot", "--m", "2", "--n", "1", "--samples", "3", "--format", "csv", "--digits", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "table,x,y");
    assert_eq!(lines.len(), 7);
    assert!(lines.contains(&"polynomial,0.500000,0.333333"));
    let v = json(&["export-plot", "--m", "3", "--n", "2", "--samples", "11"]);
    assert_eq!(v["polynomial"].as_array().unwrap().len(), 11);
    assert_eq!(v["periodic"].as_array().unwrap().len(), 11);
}

#[test]
fn plain_format() {
    let out = gbern(&["numbers", "--m", "2", "--nmax", "1", "--format", "plain"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "m: 2\nnumbers[0]: 2\nnumbers[1]: -2/3\n");
}

#[test]
fn deterministic_output() {
    let args = ["zeta-odd", "--s", "5", "--m", "2", "--r", "6", "--p", "30"];
    assert_eq!(gbern(&args).stdout, gbern(&args).stdout);
}

#[test]
fn usage_errors() {
    assert_eq!(gbern(&["--precision", "32", "numbers", "--m", "1", "--nmax", "3"]).status.code(), Some(2));
    assert_eq!(gbern(&["--digits", "100", "numbers", "--m", "1", "--nmax", "3"]).status.code(), Some(2));
    assert_eq!(gbern(&["numbers", "--m", "0", "--nmax", "3"]).status.code(), Some(2));
    assert_eq!(gbern(&["eval", "--m", "1", "--n", "2", "--x", "abc"]).status.code(), Some(2));
    assert_eq!(gbern(&["zeta-odd", "--s", "1", "--m", "1", "--r", "2", "--p", "5"]).status.code(), Some(2));
    assert_eq!(gbern(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_gbern"))
        .args(["zeta-even", "--r", "1", "--digits", "60"])
        .env("GBERN_PRECISION", "128")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_gbern"))
        .args(["zeta-even", "--r", "1", "--digits", "30"])
        .env("GBERN_PRECISION", "128")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn check_suites_pass() {
    for suite in ["core", "fourier", "zeta", "quad", "series"] {
        let out = gbern(&["check", "--suite", suite]);
        assert!(out.status.success(), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["passed"], true);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    }
}
