use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fockdict(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockdict"))
        .args(args)
        .env_remove("FOCKDICT_DEGREE")
        .output()
        .expect("spawn fockdict")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn bargmann_coefficient_mode_maps_h2_to_e2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h2.json", "[[0,0],[0,0],[1,0]]");
    let o = fockdict(&["bargmann", "--input", &input, "--degree", "2", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0,0,0\n1,0,0\n2,1,0\n");
}

#[test]
fn bargmann_quadrature_mode_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h2.csv", "0,0,0\n1,0,0\n2,1,0\n");
    let v = json(&fockdict(&[
        "bargmann", "--input", &input, "--degree", "6", "--mode", "quad",
    ]));
    let c = v.as_array().unwrap();
    assert_eq!(c.len(), 7);
    for (n, z) in c.iter().enumerate() {
        let want = if n == 2 { 1.0 } else { 0.0 };
        assert!((z[0].as_f64().unwrap() - want).abs() < 1e-10);
        assert!(z[1].as_f64().unwrap().abs() < 1e-10);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h1.json", "[[0,0],[1,0]]");
    let out = dir.path().join("f.json");
    let o = fockdict(&[
        "bargmann",
        "--input",
        &input,
        "--degree",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn degree_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h0.json", "[[1,0]]");
    let o = Command::new(env!("CARGO_BIN_EXE_fockdict"))
        .args(["bargmann", "--input", &input, "--format", "csv"])
        .env("FOCKDICT_DEGREE", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "0,1,0\n1,0,0\n");
}

#[test]
fn op_verify_reports() {
    let v = json(&fockdict(&["op", "verify", "--op", "commutator", "--degree", "12"]));
    assert_eq!(v["name"], "commutator");
    assert_eq!(v["block"], 12);
    assert!(v["residual"].as_f64().unwrap() <= 1e-12);

    let v = json(&fockdict(&[
        "op",
        "verify",
        "--op",
        "unitarity",
        "--params",
        "-0.5,0.5",
        "--degree",
        "64",
    ]));
    assert_eq!(v["name"], "unitarity");
    assert!(v["block"].as_u64().unwrap() > 0);
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn op_apply_rotation_and_fourier() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e1.json", "[[0,0],[1,0],[0,0]]");
    let o = fockdict(&[
        "op", "apply", "--op", "fourier", "--in", &f, "--degree", "2", "--format", "csv",
    ]);
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows, [[0.0, 0.0, 0.0], [1.0, 0.0, 1.0], [2.0, 0.0, 0.0]]);

    let v = json(&fockdict(&[
        "op", "apply", "--op", "rotate", "--params", "1.5", "--in", &f,
    ]));
    let e = &v[1];
    assert!((e[0].as_f64().unwrap() - 1.5f64.cos()).abs() < 1e-15);
    assert!((e[1].as_f64().unwrap() - 1.5f64.sin()).abs() < 1e-15);
}

#[test]
fn op_apply_rejects_missing_params() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e0.json", "[[1,0]]");
    let o = fockdict(&["op", "apply", "--op", "weyl", "--in", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("re,im"));
}

#[test]
fn uncertainty_on_extremal_vector_is_tight() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex.json");
    let o = fockdict(&[
        "uncertainty",
        "extremal",
        "--c",
        "1.5",
        "--a",
        "0.3",
        "--b",
        "-0.2",
        "--degree",
        "80",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&fockdict(&[
        "uncertainty",
        "--f",
        out.to_str().unwrap(),
        "--a",
        "0.3",
        "--b",
        "-0.2",
    ]));
    let (lhs, rhs) = (v["lhs"].as_f64().unwrap(), v["rhs"].as_f64().unwrap());
    assert!(v["gap"].as_f64().unwrap().abs() <= 1e-8 * rhs, "lhs {lhs} rhs {rhs}");
}

#[test]
fn uncertainty_on_e1() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e1.json", "[[0,0],[1,0],[0,0],[0,0]]");
    let v = json(&fockdict(&["uncertainty", "--f", &f]));
    assert!((v["lhs"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((v["rhs"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn gabor_commands() {
    let v = json(&fockdict(&["gabor", "predicate", "--lattice", "1,0.5"]));
    assert_eq!(v["frame"], true);
    assert_eq!(v["density_verdict"], "frame");
    let v = json(&fockdict(&["gabor", "predicate", "--lattice", "1,1"]));
    assert_eq!(v["frame"], false);

    let v = json(&fockdict(&["gabor", "density", "--lattice", "1,0.5", "--R", "20,50"]));
    let d = v["d_minus"].as_f64().unwrap();
    assert!((d - 2.0 / std::f64::consts::PI).abs() < 0.01);

    let v = json(&fockdict(&[
        "gabor",
        "frame-bounds",
        "--lattice",
        "0.5,0.5",
        "--degree",
        "48",
        "--core",
        "6",
    ]));
    let (lo, hi) = (v["lower"].as_f64().unwrap(), v["upper"].as_f64().unwrap());
    assert!(0.0 < lo && lo <= hi);
}

#[test]
fn quantize_commands() {
    let o = fockdict(&[
        "quantize", "toeplitz", "--m", "1", "--n", "1", "--degree", "2", "--format", "csv",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("0,0,1,0\n"));
    assert!(text.contains("1,1,2,0\n"));
    assert!(text.ends_with("2,2,3,0\n"));

    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "s.json",
        r#"{"terms":[{"m":1,"n":1,"re":1.0,"im":0.0},{"m":2,"n":0,"re":0.0,"im":0.5}]}"#,
    );
    for cmd in ["verify26", "anti-wick", "verify27", "weyl-heat"] {
        let v = json(&fockdict(&["quantize", cmd, "--symbol", &s, "--degree", "16"]));
        assert!(v["residual"].as_f64().unwrap() <= 1e-10, "{cmd}: {v}");
    }
}

#[test]
fn singular_apply_and_hilbert_checks() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write(
        dir.path(),
        "phi.json",
        r#"{"family":{"kind":"taylor","coeffs":[[0,0],[1,0]]}}"#,
    );
    let f = write(dir.path(), "e0.json", "[[1,0]]");
    let o = fockdict(&["singular", "--phi", &phi, "--apply", &f, "--degree", "8"]);
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 9);
    let m = json(&fockdict(&["singular", "hilbert", "--degree", "8"]));
    assert!(m.is_object() || m.is_array());

    let v = json(&fockdict(&[
        "singular", "hilbert", "--check", "tsquare", "--degree", "32",
    ]));
    assert_eq!(v["decreasing"], true);
    let v = json(&fockdict(&["singular", "hilbert", "--check", "norm", "--degree", "32"]));
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn suite_exit_codes() {
    let v = json(&fockdict(&["suite", "fourier", "--degree", "16"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["suite"], "fourier");
    let o = fockdict(&["suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csv_output_of_reports_is_rejected() {
    let o = fockdict(&["op", "verify", "--op", "commutator", "--format", "csv", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_input_names_the_path() {
    let o = fockdict(&["bargmann", "--input", "/no/such/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/no/such/file.json"));
}
