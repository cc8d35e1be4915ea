use std::path::PathBuf;
use std::process::{Command, Output};

use mgf_core::hyper::{eval_rrs_with, ParamSet};
use mgf_core::identities::{run_all, Profile};
use mgf_core::series::SeriesControl;
use mgf_core::{CMatrix, C64};
use serde_json::Value;

fn mgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgf")).args(args).output().expect("binary runs")
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("mgf-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

const PARAMS: &str = r#"{
  "upper": [{"n": 2, "data": [[0.6,0],[0.2,0],[0,0],[0.9,0.1]]}],
  "lower": [{"n": 2, "data": [[1.5,0],[0,0],[0.1,0],[1.8,0]]}],
  "P": {"n": 2, "data": [[1,0],[0,0],[0,0],[1.2,0]]},
  "Q": {"n": 2, "data": [[1.3,0.2],[0.3,0],[0,0],[0.8,0]]}
}"#;

#[test]
fn lower_incomplete_gamma_of_identity() {
    let q = write_temp("id.json", r#"{"n": 2, "data": [[1,0],[0,0],[0,0],[1,0]]}"#);
    let o = mgf(&["eval", "inc-gamma-lower", "--Q", q.to_str().unwrap(), "--x", "1.0"]);
    assert_eq!(o.status.code(), Some(0));
    let m = CMatrix::from_json_value(&stdout_json(&o)["value"]).unwrap();
    let want = CMatrix::scalar(2, C64::new(1.0 - (-1.0f64).exp(), 0.0));
    assert!(mgf_core::matcore::residual(&m, &want) < 1e-14);
}

#[test]
fn rrs_matches_library_call() {
    let p = write_temp("rrs.json", PARAMS);
    let o = mgf(&["eval", "rRs", "--params", p.to_str().unwrap(), "--z", "0.5+0i"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);

    let raw: Value = serde_json::from_str(PARAMS).unwrap();
    let m = |v: &Value| CMatrix::from_json_value(v).unwrap();
    let ps = ParamSet::new(
        vec![m(&raw["upper"][0])],
        vec![m(&raw["lower"][0])],
        m(&raw["P"]),
        m(&raw["Q"]),
    )
    .unwrap();
    let ctl = SeriesControl { tol: 1e-10, term_cap: 2000 };
    let lib = eval_rrs_with(&ps, C64::new(0.5, 0.0), ctl).unwrap();
    assert_eq!(v["value"], lib.value.to_json());
    assert_eq!(v["terms_used"], lib.terms_used);
}

#[test]
fn divergent_pfq_exits_two() {
    let p = write_temp(
        "3f1.json",
        r#"{"upper": [{"n":1,"data":[[1,0]]},{"n":1,"data":[[1,0]]},{"n":1,"data":[[1,0]]}],
            "lower": [{"n":1,"data":[[2,0]]}]}"#,
    );
    let o = mgf(&["eval", "pFq", "--params", p.to_str().unwrap(), "--z", "0.1+0i"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("diverges"));
}

#[test]
fn usage_and_input_errors_exit_four() {
    assert_eq!(mgf(&["eval", "no-such-function"]).status.code(), Some(4));
    let bad = write_temp("bad.json", r#"{"n": 2, "data": [[1,0]]}"#);
    let o = mgf(&["eval", "gamma", "--A", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(mgf(&["eval", "rRs", "--z", "0.5 + 0i"]).status.code(), Some(4));
}

#[test]
fn unknown_identity_exits_five() {
    assert_eq!(mgf(&["check", "EQ-0.0"]).status.code(), Some(5));
}

#[test]
fn single_check_report() {
    let o = mgf(&["check", "EQ-3.8", "--trials", "5", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["id"], "EQ-3.8");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["dims"], serde_json::json!([3]));
}

#[test]
fn check_all_is_deterministic_and_matches_library() {
    let args = ["check", "all", "--profile", "quick", "--seed", "7"];
    let a = mgf(&args);
    let b = mgf(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lib: String = run_all(7, Profile::Quick).iter().map(|r| r.to_json_line() + "\n").collect();
    assert_eq!(String::from_utf8(a.stdout).unwrap(), lib);
}

#[test]
fn sample_single_row() {
    let q = write_temp("q1.json", r#"{"n": 1, "data": [[1.5,0]]}"#);
    let o = mgf(&[
        "--format", "csv", "sample", "gamma-star", "--Q", q.to_str().unwrap(), "--var", "x", "--from", "1",
        "--to", "1", "--steps", "0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);
}
