use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pwldepth"))
        .args(args)
        .env_remove("PWLDEPTH_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut si = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            si.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let o = run(args, stdin);
    assert!(
        o.status.success(),
        "{args:?} exited with {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

fn pipe(first: &[&str], second: &[&str]) -> String {
    ok(second, Some(&ok(first, None)))
}

#[test]
fn simplex_bounds_through_a_pipe() {
    let text = pipe(&["gen", "simplex", "--n", "4"], &["poly", "bounds"]);
    assert!(text.starts_with("depth: [3, 3]"), "{text}");
    assert!(text.contains("certificate:"));
    let v = json(&pipe(&["gen", "simplex", "--n", "4"], &["poly", "bounds", "--json"]));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(3), Some(3)));
    assert!(!v["certificate"].as_array().unwrap().is_empty());
}

#[test]
fn generic_zonotope_bounds() {
    let v = json(&pipe(
        &["gen", "zonotope", "--n", "3", "--p", "5", "--seed", "7"],
        &["poly", "bounds", "--json"],
    ));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(1), Some(1)));
    assert_eq!(v["vertices"].as_u64(), Some(22));
}

#[test]
fn sum_rule_from_the_command_line() {
    let text = ok(&["depth", "sum", "--i1", "2,2", "--i2", "3,3"], None);
    assert!(text.starts_with("sum: [3, 3]"), "{text}");
    let v = json(&ok(&["depth", "sum", "--i1", "2,2", "--i2", "2,2", "--json"], None));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(0), Some(2)));
}

#[test]
fn certificates_replay_and_tampering_is_caught() {
    let cert = ok(&["depth", "sum", "--i1", "1,2", "--i2", "3", "--json"], None);
    let replayed = json(&ok(&["depth", "interval", "--json"], Some(&cert)));
    assert_eq!(replayed, json(&cert));

    let mut bad = json(&cert);
    bad["upper"] = 5.into();
    let o = run(&["depth", "interval"], Some(&bad.to_string()));
    assert_eq!(o.status.code(), Some(1));

    let mut bad = json(&cert);
    bad["certificate"][2]["result"]["upper"] = 4.into();
    let o = run(&["depth", "interval"], Some(&bad.to_string()));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["gen", "zonotope", "--n", "3", "--p", "4", "--seed", "11"];
    assert_eq!(ok(&args, None), ok(&args, None));
    let with_env = Command::new(env!("CARGO_BIN_EXE_pwldepth"))
        .args(["gen", "zonotope", "--n", "3", "--p", "4"])
        .env("PWLDEPTH_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), ok(&args, None));
    assert_ne!(ok(&args, None), ok(&["gen", "zonotope", "--n", "3", "--p", "4"], None));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["gen", "simplex"], None).status.code(), Some(2));
    assert_eq!(run(&["depth", "sum", "--i1", "3,1", "--i2", "0"], None).status.code(), Some(2));
    assert_eq!(run(&["poly", "bounds"], Some("{\"dim\": 2")).status.code(), Some(2));
    assert_eq!(
        run(&["poly", "bounds"], Some("{\"dim\": 2, \"vertices\": [[0, 0], [1, 2, 3]]}")).status.code(),
        Some(2)
    );
    assert_eq!(run(&["gen", "cyclic", "--n", "2", "--params", "1,1,2"], None).status.code(), Some(2));
}

#[test]
fn special_solids() {
    let v = json(&pipe(&["gen", "bipyramid"], &["poly", "bounds", "--json"]));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(2), Some(2)));
    let tb = ok(&["gen", "bipyramid", "--base", "triangle"], None);
    let v = json(&ok(&["poly", "bounds", "--json"], Some(&tb)));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(3), Some(3)));
    let v = json(&ok(&["poly", "bounds", "--json", "--no-known"], Some(&tb)));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(2), Some(3)));
}

#[test]
fn cyclic_polytopes_are_neighborly() {
    let v = json(&pipe(&["gen", "cyclic", "--n", "4", "--p", "9"], &["poly", "graph", "--json"]));
    assert_eq!(v["complete"], Value::Bool(true));
    assert_eq!(v["edges"].as_array().unwrap().len(), 36);
}

#[test]
fn polygon_decomposition_resums() {
    let hexagon = r#"{"points": [[0,0],[4,0],[5,2],[3,5],[0,3],[1,1]]}"#;
    let poly = ok(&["poly", "hull"], Some(hexagon));
    let d = json(&ok(&["poly", "decompose"], Some(&poly)));
    assert_eq!(d["depth_upper"].as_u64(), Some(2));
    let parts = d["summands"].as_array().unwrap();
    let dir = std::env::temp_dir().join(format!("pwldepth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut acc = parts[0].to_string();
    for (i, part) in parts.iter().enumerate().skip(1) {
        let f = dir.join(format!("part{i}.json"));
        std::fs::write(&f, part.to_string()).unwrap();
        acc = ok(&["poly", "minksum", "--with", f.to_str().unwrap()], Some(&acc));
    }
    let _ = std::fs::remove_dir_all(&dir);
    let shape = |s: &str| {
        let g = json(&ok(&["poly", "faces", "--json"], Some(s)));
        g["f_vector"].clone()
    };
    assert_eq!(shape(&acc), shape(&poly));
    let count = |s: &str| json(s)["vertices"].as_array().unwrap().len();
    assert_eq!(count(&acc), count(&poly));
}

#[test]
fn bridge_round_trip_and_compile() {
    let poly = ok(&["gen", "cyclic", "--n", "3", "--p", "6"], None);
    let f = ok(&["bridge", "support"], Some(&poly));
    let back = json(&ok(&["bridge", "newton"], Some(&f)));
    assert_eq!(back["vertices"], json(&poly)["vertices"]);

    let net = ok(&["bridge", "compile", "--samples", "100"], Some(&poly));
    let info = json(&ok(&["net", "info", "--json"], Some(&net)));
    assert_eq!(info["hidden_depth"].as_u64(), Some(3));
    let at = ["--at", "1,-1/2,2", "--at", "0,0,-1", "--json"];
    let from_net = json(&ok(&[&["net", "eval"][..], &at[..]].concat(), Some(&net)));
    let from_fn = json(&ok(&[&["cpwl", "eval"][..], &at[..]].concat(), Some(&f)));
    assert_eq!(from_net, from_fn);
}

#[test]
fn homomorphism_check() {
    let dir = std::env::temp_dir().join(format!("pwldepth-hom-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let q = dir.join("q.json");
    std::fs::write(&q, ok(&["gen", "zonotope", "--n", "3", "--p", "3"], None)).unwrap();
    let p = ok(&["gen", "simplex", "--n", "3"], None);
    let v = json(&ok(
        &["bridge", "check-homomorphism", "--with", q.to_str().unwrap(), "--samples", "50", "--json"],
        Some(&p),
    ));
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(v["holds"], Value::Bool(true));
}

#[test]
fn compiled_expressions_match() {
    let f = r#"{"dim": 2, "op": "max", "args": [
        {"op": "affine", "coeffs": ["1", "0"], "constant": "0"},
        {"op": "affine", "coeffs": ["0", "1"], "constant": "0"},
        {"op": "affine", "coeffs": ["-1", "-1"], "constant": "1/2"}]}"#;
    let net = ok(&["cpwl", "compile", "--samples", "100"], Some(f));
    assert_eq!(json(&ok(&["net", "info", "--json"], Some(&net)))["hidden_depth"].as_u64(), Some(2));
    let bound = json(&ok(&["depth", "interval", "--json"], Some(f)));
    assert_eq!(bound["upper"].as_u64(), Some(2));
}

#[test]
fn max_example_generation() {
    let v = json(&ok(
        &["gen", "max-example", "--n", "2", "--m1", "1", "--m2", "2", "--m-star", "2", "--samples", "50"],
        None,
    ));
    assert_eq!(v["depths"], serde_json::json!([1, 2, 2]));
    assert_eq!(v["intervals"]["max"]["lower"].as_u64(), Some(2));
}

#[test]
fn prisms_and_pyramids() {
    let z = ok(&["gen", "zonotope", "--n", "2", "--p", "3"], None);
    let prism = ok(&["gen", "prism"], Some(&z));
    let v = json(&ok(&["poly", "bounds", "--json"], Some(&prism)));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(1), Some(1)));
    let pyr = ok(&["gen", "pyramid"], Some(&z));
    let v = json(&ok(&["poly", "bounds", "--json"], Some(&pyr)));
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(2), Some(2)));
    let v = json(&ok(&["poly", "is-zonotope", "--json"], Some(&prism)));
    assert_eq!(v["zonotope"], Value::Bool(true));
}

#[test]
fn verify_subset() {
    let text = ok(&["verify", "all", "--only", "2,6"], None);
    assert!(text.contains("PASS criterion  2"));
    assert!(text.contains("2 of 2 criteria passed"));
    assert_eq!(run(&["verify", "all", "--only", "0"], None).status.code(), Some(2));
}
