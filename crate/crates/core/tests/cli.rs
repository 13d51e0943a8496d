use std::process::{Command, Output};

use b1lab::harness::run_suite;
use b1lab::{Config, Lab};

fn b1lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_b1lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn unknown_check_is_a_usage_error() {
    let o = b1lab(&["verify", "--suite", "quad,nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonsense"));
}

#[test]
fn bad_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lab.cfg");
    std::fs::write(&path, "N = 64\nwobble = 3\n").unwrap();
    let o = b1lab(&["--config", path.to_str().unwrap(), "norm", "--space", "b1", "--f", "z^2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_expression_is_a_usage_error() {
    let o = b1lab(&["norm", "--space", "b1", "--f", "poly:1,"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn norm_of_monomial() {
    let o = b1lab(&["norm", "--space", "b1", "--f", "poly:0,0,0,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("value = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 4.0).abs() < 1e-10, "{text}");
}

#[test]
fn apply_volterra_to_constant() {
    let o = b1lab(&["apply", "--op", "Tg", "--symbol", "poly:0,1", "--f", "const:1", "--N", "3"]);
    assert!(o.status.success());
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][1], 1.0);
    assert!(rows.iter().enumerate().all(|(k, r)| k == 1 || r[1] == 0.0));
}

#[test]
fn portrait_has_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = b1lab(&[
        "portrait", "--op", "Mg", "--symbol", "poly:0,1", "--rect", "-2,-1.8,1.6,1.8", "--step", "0.1", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,winding,resolvent_lb,flag"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.ends_with(",FINITE")));
}

#[test]
fn verify_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let o = b1lab(&["verify", "--suite", "quad,thm4", "--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 2);
    assert_eq!(report["summary"]["passed"], 2);
    let csv = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "id,pass,measured,bound,tolerance,runtime_ms");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("quad,true,"));
}

#[test]
fn falsified_claim_fails_the_run() {
    let o = b1lab(&["verify", "--suite", "thm11"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn suite_is_deterministic_apart_from_timing() {
    let lab = Lab::new(Config::default()).unwrap();
    let names = vec!["quad,lemma1,thm3,thm13".to_string()];
    let a = run_suite(&lab, &names).unwrap().without_timing();
    let b = run_suite(&lab, &names).unwrap().without_timing();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}
