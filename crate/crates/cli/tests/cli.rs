use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nullkg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nullkg")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn fixtures(dir: &Path) -> PathBuf {
    let out = dir.join("fixtures");
    let o = nullkg(&["export-fixtures", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let o = nullkg(&["analyze", s(&fx.join("kgz.json"))]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], "applies");
    assert!(String::from_utf8_lossy(&o.stderr).contains("I1=[] I2=[1]"));
    assert_eq!(code(&nullkg(&["analyze", s(&fx.join("kata_raw.json"))])), 2);
    assert_eq!(code(&nullkg(&["analyze", s(&tmp.path().join("missing.json"))])), 1);
}

#[test]
fn analyze_output_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(code(&nullkg(&["analyze", s(&fx.join("typical_example.json")), "--out", s(d)])), 0);
    }
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read(&a, "report.json"), read(&b, "report.json"));
    let m: serde_json::Value = serde_json::from_slice(&read(&a, "manifest.json")).unwrap();
    assert_eq!(m["command"], "analyze");
    assert_eq!(m["spec_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn simulate_outputs_and_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let run = |spec: &str, out: &str, extra: &[&str]| {
        let out = tmp.path().join(out);
        let spec = fx.join(spec);
        let mut args = vec!["simulate", s(&spec), "--out"];
        let out_s = out.to_str().unwrap().to_string();
        args.push(&out_s);
        args.extend_from_slice(extra);
        (code(&nullkg(&args)), out)
    };

    let (c, out) = run("john_blowup.json", "john", &["--epsilon", "0.3"]);
    assert_eq!(c, 3);
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert!(report["blowup_time"].as_f64().unwrap() < 2.0);

    let (c, out) = run("kgz.json", "zero", &["--epsilon", "0", "--t-end", "2", "--dump"]);
    assert_eq!(c, 0);
    let csv = std::fs::read_to_string(out.join("series.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').skip(2).all(|x| x == "0.0")));
    assert!(out.join("fields.bin").exists() && out.join("manifest.json").exists());

    let (c1, a) = run("kata_raw.json", "k1", &["--epsilon", "0.05", "--t-end", "3", "--dr", "0.1"]);
    let (c2, b) = run("kata_raw.json", "k2", &["--epsilon", "0.05", "--t-end", "3", "--dr", "0.1"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(std::fs::read(a.join("series.csv")).unwrap(), std::fs::read(b.join("series.csv")).unwrap());

    let (c, _) = run("kgz_reduced.json", "bad", &["--t-end", "1"]);
    assert_eq!(c, 1);
}

#[test]
fn simulate_reports_unsupported_variable() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("self.json");
    let text = r#"{"N": 1, "N1": 0, "masses": [0.0], "equations": [{"terms": [
        {"a": {"component": 1, "deriv": []}, "b": {"component": 1, "deriv": [1, 1]}, "coeff": "1"}]}]}"#;
    std::fs::write(&spec, text).unwrap();
    let o = nullkg(&["simulate", s(&spec), "--out", s(&tmp.path().join("o"))]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("d11u1"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn decay_fit_on_simulated_series() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let out = tmp.path().join("kg");
    let o = nullkg(&["simulate", s(&fx.join("free_kg.json")), "--epsilon", "1", "--t-end", "60", "--dr", "0.1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let csv = out.join("series.csv");
    let o = nullkg(&["decay-fit", s(&csv), "--component", "1", "--window", "20,60"]);
    assert_eq!(code(&o), 0);
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let slope = rep["slope"].as_f64().unwrap();
    assert!((slope + 1.5).abs() < 0.2, "{slope}");
    assert_eq!(code(&nullkg(&["decay-fit", s(&csv), "--window", "100,200"])), 1);
    assert_eq!(code(&nullkg(&["decay-fit", s(&csv), "--weight", "bogus"])), 1);
}

#[test]
fn identity_suites() {
    for suite in ["frame", "nullform", "sobolev"] {
        let o = nullkg(&["identities", "--suite", suite, "--seed", "7"]);
        assert_eq!(code(&o), 0, "{suite}: {}", String::from_utf8_lossy(&o.stdout));
    }
    assert_eq!(code(&nullkg(&["identities", "--suite", "nonsense"])), 1);
}

#[test]
fn contrast_small_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("c");
    let o = nullkg(&["contrast", "--epsilon", "0.3,0", "--t-end", "5", "--dr", "0.04", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let rep: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["runs"][0]["time_derivative_squared"]["outcome"], "blowup");
    assert_eq!(rep["runs"][0]["null_form"]["outcome"], "bounded");
    assert_eq!(rep["runs"][1]["null_form"]["sup_u"], 0.0);
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(code(&nullkg(&["simulate"])), 1);
    assert_eq!(code(&nullkg(&["frobnicate"])), 1);
    assert_eq!(code(&nullkg(&["--help"])), 0);
}
