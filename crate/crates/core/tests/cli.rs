use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn graph(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../graphs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn coxnl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_coxnl"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = coxnl(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn classify_d_infinity() {
    let v = json(&["classify", &graph("d_infinity.graph")]);
    assert_eq!(v["status"], "NOT_NL");
    assert_eq!(v["trace"][0]["rule"], "R1-disconnected");
    assert_eq!(v["witness"]["type"], "epimorphism");
    assert_eq!(v["witness"]["A"], serde_json::json!(["s"]));
    assert_eq!(v["witness"]["B"], serde_json::json!(["r"]));
}

#[test]
fn classify_euclidean_triangle() {
    let v = json(&["classify", &graph("triangle_2_3_6.graph")]);
    assert_eq!(v["status"], "NL");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.last().unwrap()["rule"], "R5-euclidean");
    assert!(v["witness"].is_null());
}

#[test]
fn classify_hyperbolic_triangle() {
    let v = json(&["classify", &graph("triangle_2_3_7.graph")]);
    assert_eq!(v["status"], "NOT_NL");
    assert_eq!(v["witness"]["type"], "loxodromic");
    assert_eq!(v["witness"]["word"], serde_json::json!(["a", "b", "c"]));
    let rho = v["witness"]["spectral_radius"].as_f64().unwrap();
    assert!((rho - 1.635_573_129_922_221).abs() < 1e-9);
}

#[test]
fn classify_text_format() {
    let (code, out, _) = coxnl(&["--format", "text", "classify", &graph("path_3_4.graph")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("status: UNKNOWN"));
    assert!(out.contains("none found"));
    assert_eq!(out.lines().filter(|l| l.starts_with("  [R")).count(), 7);
}

#[test]
fn classify_json_input() {
    let v = json(&["classify", &graph("square_right_angled.json")]);
    assert_eq!(v["status"], "NOT_NL");
    assert_eq!(v["trace"][1]["rule"], "R2-incomplete");
}

#[test]
fn witness_subcommand() {
    let v = json(&["witness", &graph("path_4_4.graph"), "ab"]);
    assert_eq!(v["witness"]["A"], serde_json::json!(["a"]));
    assert_eq!(v["witness"]["B"], serde_json::json!(["c"]));
    assert_eq!(v["witness"]["K"], serde_json::json!(["b"]));
    assert_eq!(v["verified"], true);
    assert_eq!(v["image"]["isometry"], "ELLIPTIC_REFLECTION");

    let v = json(&["witness", &graph("path_4_4.graph"), "a c"]);
    assert_eq!(v["image"]["isometry"], "LOXODROMIC_TRANSLATION");
    assert_eq!(v["image"]["datum"]["translation_length"], 2);

    let v = json(&["witness", &graph("s3.graph")]);
    assert!(v["witness"].is_null());
    assert_eq!(v["verified"], false);
}

#[test]
fn georep_spectrum() {
    let v = json(&["georep", "spectrum", &graph("triangle_2_3_7.graph"), "abc"]);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 9);
    assert!(v["form_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["form_preserved"], true);
    assert_eq!(v["signature"], serde_json::json!({"plus": 2, "zero": 0, "minus": 1}));
}

#[test]
fn cayley_subcommands() {
    let v = json(&["cayley", "ball", &graph("d_infinity.graph"), "5"]);
    assert_eq!(v["nodes"], 11);
    assert!(v["dot"].as_str().unwrap().starts_with("graph cayley {"));

    let (code, out, _) = coxnl(&["--format", "text", "cayley", "ball", &graph("z2_x_z2.graph"), "3"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("nodes: 4\n"));

    let v = json(&["cayley", "delta", &graph("triangle_3_3_3.graph"), "2"]);
    assert_eq!(v["mode"], "exhaustive");
    assert_eq!(v["lower_bound"], false);

    let v = json(&["cayley", "delta", &graph("d_infinity.graph"), "6", "--sampled", "3"]);
    assert_eq!(v["delta"], 0.0);
    assert_eq!(v["mode"], "sampled");
    assert_eq!(v["k"], 3);
}

#[test]
fn exit_codes() {
    // 2: usage and syntax.
    assert_eq!(coxnl(&[]).0, 2);
    assert_eq!(coxnl(&["classify"]).0, 2);
    assert_eq!(coxnl(&["classify", "/no/such/file"]).0, 2);
    let bad_syntax = scratch("bad_syntax.graph", "vertices: a b\nedge a b\n");
    let (code, _, err) = coxnl(&["classify", &bad_syntax]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"));
    assert_eq!(coxnl(&["--lox-margin", "0", "classify", &graph("s3.graph")]).0, 2);
    assert_eq!(coxnl(&["georep", "spectrum", &graph("s3.graph"), "xyz"]).0, 2);

    // 3: invalid graph.
    let low = scratch("low_label.graph", "vertices: a b\nedge a b 1\n");
    assert_eq!(coxnl(&["classify", &low]).0, 3);
    let dup = scratch("dup.graph", "vertices: a a\n");
    assert_eq!(coxnl(&["classify", &dup]).0, 3);

    // 4: capacity.
    assert_eq!(coxnl(&["cayley", "ball", &graph("d_infinity.graph"), "13"]).0, 4);
    let names: Vec<String> = (0..21).map(|i| format!("v{i}")).collect();
    let big = scratch(
        "big.graph",
        &format!("vertices: {}\nedge v0 v1 3\n", names.join(" ")),
    );
    let (code, out, _) = coxnl(&["classify", &big]);
    assert_eq!(code, 0, "disconnected graphs are decided without search");
    assert!(out.contains("NOT_NL"));
    let edges: String = (1..21).map(|i| format!("edge v0 v{i} 3\n")).collect();
    let star = scratch("star.graph", &format!("vertices: {}\n{edges}", names.join(" ")));
    assert_eq!(coxnl(&["classify", &star]).0, 4);

    // 5: numeric ambiguity, forced by a coarse eigenvalue tolerance.
    let four = scratch(
        "borderline.graph",
        "vertices: a b c d\nedge a b 3\nedge b c 3\nedge c d 3\nedge a c 2\nedge b d 2\nedge a d 7\n",
    );
    assert_eq!(coxnl(&["--sig-tol", "0.05", "georep", "spectrum", &four, "ab"]).0, 5);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = coxnl(&["--format", "text", "selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("10/10 criteria passed"));
}
