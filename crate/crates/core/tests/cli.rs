//! The `srkit` binary: exit codes, determinism and report contents.

use std::process::{Command, Output};

use serde_json::Value;

fn srkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srkit")).args(args).env("SRKIT_THREADS", "1").output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = srkit(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr));
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn heisenberg_verdict_fails_all_k() {
    let (code, v) = report(&["verdict", "heisenberg.toml", "--at", "0,0,0", "--weights", "1,1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["outcome"], "BE_FAILS_ALL_K");
    assert_eq!(v["outputs"]["verdict"]["certificate"]["value"], "2");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["inputs"]["budget_degree"], 4);
}

#[test]
fn small_budget_is_inconclusive_with_exit_one() {
    let (code, v) = report(&["verdict", "grushin", "--budget-degree", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["outputs"]["outcome"], "INCONCLUSIVE");
}

#[test]
fn euclidean_strata_have_step_one() {
    let (code, v) = report(&["strata", "euclidean2.toml"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["step"], 1);
}

#[test]
fn np_at_one_is_infinite() {
    let (code, v) = report(&["grushin", "np", "--p", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["n_p"], "inf");
}

#[test]
fn bm_that_holds_exits_one() {
    let (code, v) = report(&["grushin", "bm", "--p", "0", "--ell", "10", "--grid", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["outputs"]["runs"][0]["violation"], false);
}

#[test]
fn errors_exit_two() {
    assert_eq!(srkit(&["verdict", "no_such_structure"]).status.code(), Some(2));
    assert_eq!(srkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(srkit(&["grushin", "ricci", "--p", "3", "--N", "2"]).status.code(), Some(2));
    assert_eq!(srkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_structure_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "name = \"bad\"\ndimension = 2\nfields = [\"dx\", \"x^-1*dy\"]\n").unwrap();
    let out = srkit(&["filtration", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.toml:3:20"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["classify", "martinet", "--seed", "7"][..],
        &["grushin", "distance", "--from", "2,0", "--to", "2,1"][..],
        &["selfcheck"][..],
    ] {
        let (_, mut a) = report(args);
        let (_, mut b) = report(args);
        a.as_object_mut().unwrap().remove("wall_time_ms");
        b.as_object_mut().unwrap().remove("wall_time_ms");
        assert_eq!(a.to_string(), b.to_string(), "{args:?}");
    }
}

#[test]
fn gallery_passes_selfcheck() {
    let (code, v) = report(&["selfcheck"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(v["outputs"]["structures"].as_array().unwrap().len(), 4);
}

#[test]
fn out_and_svg_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("geo.json");
    let svg = dir.path().join("geo.svg");
    let out = srkit(&[
        "grushin", "geodesic", "--from", "1,0", "--cov", "0,1", "--out", json.to_str().unwrap(), "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["command"], "grushin geodesic");
    assert!(std::fs::read_to_string(svg).unwrap().contains("<polyline"));
    let margin = dir.path().join("bm.svg");
    let out = srkit(&["grushin", "bm", "--ell", "10,25,50", "--grid", "4", "--svg", margin.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(margin).unwrap().contains("margin vs l"));
    let empty = dir.path().join("none.svg");
    assert_eq!(srkit(&["grushin", "np", "--p", "2", "--svg", empty.to_str().unwrap()]).status.code(), Some(2));
}
