use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ngp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ngp")).args(args).env_remove("NGP_THREADS").output().expect("run ngp")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({}): {}", e, String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn pairs_list() {
    let out = ngp(&["pairs", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    let ids: Vec<&str> = j["pairs"].as_array().unwrap().iter().map(|p| p["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["L6:n=2", "L6:n=3", "L8:n=2", "L8:n=3"]);
    // u(2) ⊕ su(2) and u(2) ⊕ su(3)
    assert_eq!(j["pairs"][2]["generators"].as_array().unwrap().len(), 7);
    assert_eq!(j["pairs"][3]["generators"].as_array().unwrap().len(), 12);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ngp(&["invariants", "build", "--pair", "L7:n=2"]).status.code(), Some(2));
    assert_eq!(ngp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ngp(&["um", "--pair", "L6:n=2"]).status.code(), Some(2));
    assert_eq!(ngp(&["verify", "all", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(ngp(&["--help"]).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_ngp")).args(["pairs", "list"]).env("NGP_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NGP_THREADS"));
}

#[test]
fn um_reports_the_product_form() {
    let out = ngp(&["um", "--pair", "L6:n=2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["matches_product"], Value::Bool(true));
    assert_eq!(j["scale"], "1/32+0/1i");
    assert_eq!(j["display"], "-4*xi2^2 + xi1^2");
}

#[test]
fn invariants_then_decompose_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let inv = dir.path().join("inv.json");
    let out = ngp(&["invariants", "build", "--pair", "L6:n=2", "--out", inv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&inv).unwrap()).unwrap();
    let names: Vec<&str> = j["invariants"].as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["r1", "q2", "p1"]);
    let p1 = write(dir.path(), "p1.json", &j["invariants"][2]["poly"].to_string());
    let out = ngp(&["decompose", "--pair", "L6:n=2", "--in", &p1]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let d = json_of(&out);
    assert_eq!(d["reconstructed"], Value::Bool(true));
    assert_eq!(d["terms"].as_array().unwrap().len(), 1);
    assert_eq!(d["terms"][0]["label"], "~p1");
    assert_eq!(d["terms"][0]["coeff"], "1/1+0/1i");
}

#[test]
fn harmonic_projection_from_file() {
    let dir = tempfile::tempdir().unwrap();
    // v1*vb1 on L6:n=2: layout (v1, v2, vb1, vb2, z1, z2, z3)
    let text = r#"{"vars":{"v":2,"z":3,"t":0,"xi":0},"terms":[{"exp":[1,0,1,0,0,0,0],"re":"1/1","im":"0/1"}]}"#;
    let f = write(dir.path(), "p.json", text);
    let out = ngp(&["harmonic", "--pair", "L6:n=2", "--m", "1", "--in", &f]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let j = json_of(&out);
    assert_eq!(j["harmonic"], Value::Bool(true));
    assert_eq!(j["display"], "-1/2*v2*vb2 + 1/2*v1*vb1");
}

#[test]
fn malformed_inputs_exit_1_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let short = r#"{"vars":{"v":2,"z":3,"t":0,"xi":0},"terms":[{"exp":[1,0,1,0,0,0,0],"re":"1","im":"0"},{"exp":[1,0],"re":"1","im":"0"}]}"#;
    let f = write(dir.path(), "short.json", short);
    let out = ngp(&["decompose", "--pair", "L6:n=2", "--in", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("term 1"), "{}", stderr(&out));

    let f = write(dir.path(), "broken.json", "{\"vars\":\n {\"v\": 2,,}");
    let out = ngp(&["decompose", "--pair", "L6:n=2", "--in", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = ngp(&["decompose", "--pair", "L6:n=2", "--in", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("io"));

    // v1*vb2*z1 is not invariant
    let text = r#"{"vars":{"v":2,"z":3,"t":0,"xi":0},"terms":[{"exp":[1,0,0,1,1,0,0],"re":"1/1","im":"0/1"}]}"#;
    let f = write(dir.path(), "ni.json", text);
    let out = ngp(&["decompose", "--pair", "L6:n=2", "--in", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("annihilate"), "{}", stderr(&out));
}

#[test]
fn spectrum_flags_membership_in_sm() {
    let out = ngp(&["spectrum", "--pair", "L8:n=2", "--lambda", "1,-1/2", "--smax", "2", "--sm", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let j = json_of(&out);
    let pts = j["points"].as_array().unwrap();
    assert_eq!(pts.len(), 8);
    for p in pts {
        assert_eq!(p["in_sm"].as_bool().unwrap(), p["i"] == 0, "{}", p);
    }
    assert_eq!(pts[0]["xi"], serde_json::json!(["4/1+0/1i", "16/1+0/1i", "1/1+0/1i"]));
    let out = ngp(&["spectrum", "--pair", "L6:n=2", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_one_pair_is_deterministic() {
    let run = || {
        let out = ngp(&["verify", "all", "--pair", "L6:n=2"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let mut r: ngp::report::Report = serde_json::from_slice(&out.stdout).unwrap();
        r.checks = r.checks.iter().map(|c| c.without_runtime()).collect();
        serde_json::to_string(&r).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let j: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(j["status"], "pass");
    let names: Vec<&str> = j["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), ngp::suite::check_names().len());
}

#[test]
fn verify_selected_checks() {
    let out = ngp(&["verify", "all", "--pair", "L8:n=3", "--check", "spectrum.eigenvalue_law", "--check", "invariants.catalogue"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let j = json_of(&out);
    assert_eq!(j["checks"].as_array().unwrap().len(), 2);
    assert_eq!(j["checks"][0]["check"], "invariants.catalogue");
    assert_eq!(j["checks"][0]["pair"], "L8:n=3");
}
