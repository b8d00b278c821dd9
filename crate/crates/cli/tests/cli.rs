use std::process::{Command, Output};

use serde_json::Value;

fn orbiflip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbiflip")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = orbiflip(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn analyze_francia_flop() {
    let (code, v) = json(&["analyze", "--seq", "1,2;1,1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "orbiflip/1");
    assert_eq!(v["result"]["classification"]["kind"], "Flop");
    let atlas = v["result"]["atlas"].as_array().unwrap();
    let singular: Vec<&Value> = atlas.iter().filter(|e| e["label"] != "smooth").collect();
    let minus: Vec<&&Value> = singular.iter().filter(|e| e["space"] == "Minus").collect();
    assert_eq!(minus.len(), 1);
    assert_eq!(minus[0]["label"], "1/2(1,1,1,1)");
    assert!(atlas.iter().filter(|e| e["space"] == "Plus").all(|e| e["label"] == "smooth"));
}

#[test]
fn analyze_normalizes() {
    let (code, v) = json(&["analyze", "--seq", "2,4;2,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["normalization"]["output"]["a"], serde_json::json!([1, 2]));
    assert_eq!(v["result"]["normalization"]["output"]["b"], serde_json::json!([1, 1]));
    let text = String::from_utf8(orbiflip(&["analyze", "--seq", "1,2,3;"]).stdout).unwrap();
    assert!(text.contains("WeightedProjectiveSpace"), "{text}");
}

#[test]
fn resolve_tables() {
    let (code, v) = json(&["resolve", "--seq", "1,2;", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["tables"][0]["betti"], serde_json::json!({"1": [2, 2], "2": [4]}));
    assert_eq!(v["result"]["tables"][0]["bounds_ok"], true);
    let (_, v) = json(&["resolve", "--seq", "1,1;", "--k", "0..2"]);
    assert_eq!(v["result"]["tables"][0]["betti"], serde_json::json!({"1": [0]}));
    assert_eq!(v["result"]["tables"][2]["betti"], serde_json::json!({"1": [2, 2, 2], "2": [3, 3]}));
}

#[test]
fn transform_gives_threshold_ideal() {
    let out = orbiflip(&["transform", "--seq", "1,1;1,1", "--functor", "F", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("I2[x]O+(-2)"), "{text}");
}

#[test]
fn cohomology_of_weighted_plane() {
    let (code, v) = json(&["cohomology", "--seq", "1,1,2;", "--k", "2", "--box", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["tables"][0]["totals"], serde_json::json!({"0": 4}));
}

#[test]
fn verify_suites_pass() {
    for (s, suite) in [("1,1;1,1", "roundtrip"), ("1,2;1,1,1", "example51"), ("1,2;", "serre")] {
        let out = orbiflip(&["verify", "--seq", s, "--suite", suite, "--threads", "2"]);
        assert_eq!(out.status.code(), Some(0), "{s} {suite}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn flip_on_the_wrong_side_asks_to_swap() {
    let out = orbiflip(&["verify", "--seq", "2,1;1,1", "--suite", "roundtrip"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("swap sides"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["analyze"],
        vec!["analyze", "--seq", "1,x;1"],
        vec!["analyze", "--seq", "1,1;1,1", "--box", "0"],
        vec!["resolve", "--seq", "1,2;"],
        vec!["frobnicate", "--seq", "1,1;1,1"],
        vec!["verify", "--seq", "1,1;1,1", "--suite", "serre"],
    ] {
        assert_eq!(orbiflip(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_reports_are_byte_stable() {
    let args = ["verify", "--seq", "1,2;1,1,1", "--suite", "roundtrip", "--k", "0..2", "--json"];
    let (a, b) = (orbiflip(&args), orbiflip(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
