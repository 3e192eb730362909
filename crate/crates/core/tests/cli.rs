use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tre() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tre"));
    cmd.env_remove("TRE_SEED");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn compute(rho: &Path, sigma: &Path, extra: &[&str]) -> (i32, Value) {
    let out = run(tre()
        .arg("compute")
        .arg("--rho")
        .arg(rho)
        .arg("--sigma")
        .arg(sigma)
        .args(extra));
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn compute_examples() {
    let dir = TempDir::new().unwrap();
    let r = write(dir.path(), "r.json", r#"{"diag": [0.37, 0.0, 0.63]}"#);
    let s = write(dir.path(), "s.json", r#"{"diag": [0.0, 0.37, 0.63]}"#);
    let (code, v) = compute(&r, &s, &["--a", "0.3"]);
    assert_eq!(code, 0);
    assert!((num(&v, "s_a") - 0.37).abs() <= 1e-9);
    assert!((num(&v, "trace_distance") - 0.37).abs() <= 1e-12);
    assert_eq!(v["units"], "nats");

    let (code, v) = compute(&r, &r, &["--a", "0.5"]);
    assert_eq!(code, 0);
    assert!(num(&v, "s_a").abs() <= 1e-12 && num(&v, "trace_distance").abs() <= 1e-12);

    let up = write(dir.path(), "up.json", r#"{"bloch": [0, 0, 1]}"#);
    let down = write(dir.path(), "down.json", r#"{"pure": [[0, 0], [1, 0]]}"#);
    let (code, v) = compute(&up, &down, &["--a", "0.5", "--p", "0.5"]);
    assert_eq!(code, 0);
    assert!((num(&v, "s_a") - 1.0).abs() <= 1e-9);
    assert!((num(&v, "q") - 1.0).abs() <= 1e-9);
}

#[test]
fn bits_rescale_entropies() {
    let dir = TempDir::new().unwrap();
    let r = write(dir.path(), "r.json", r#"{"diag": [0.8, 0.2]}"#);
    let s = write(dir.path(), "s.json", r#"{"bloch": [0.3, -0.2, 0.1]}"#);
    let (_, nats) = compute(&r, &s, &["--a", "0.4"]);
    let (_, bits) = compute(&r, &s, &["--a", "0.4", "--bits"]);
    assert_eq!(bits["units"], "bits");
    for key in ["relative_entropy", "relative_entropy_bound"] {
        let ratio = num(&bits, key) / num(&nats, key);
        assert!((ratio - 1.0 / std::f64::consts::LN_2).abs() <= 1e-12, "{key}");
    }
    assert_eq!(num(&bits, "s_a"), num(&nats, "s_a"));
}

#[test]
fn csv_is_plain() {
    let dir = TempDir::new().unwrap();
    let r = write(dir.path(), "r.json", r#"{"diag": [0.5, 0.25, 0.25]}"#);
    let s = write(dir.path(), "s.json", r#"{"diag": [0.125, 0.125, 0.75]}"#);
    let out = run(tre()
        .env("LC_ALL", "de_DE.UTF-8")
        .env("LC_NUMERIC", "de_DE.UTF-8")
        .args(["compute", "--a", "0.5", "--format", "csv", "--rho"])
        .arg(&r)
        .arg("--sigma")
        .arg(&s));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("# ") && lines[0].contains("nats"));
    let header: Vec<&str> = lines[1].split(',').collect();
    let row: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(header.len(), row.len());
    for (h, cell) in header.iter().zip(&row) {
        if !cell.is_empty() {
            cell.parse::<f64>().unwrap_or_else(|_| panic!("{h} = {cell}"));
        }
    }
}

#[test]
fn pure_matches_compute_on_bloch_pair() {
    let dir = TempDir::new().unwrap();
    let t = (std::f64::consts::PI / 8.0).sin();
    let theta = std::f64::consts::FRAC_PI_4;
    let r = write(dir.path(), "r.json", r#"{"bloch": [0, 0, 1]}"#);
    let s = write(
        dir.path(),
        "s.json",
        &format!(r#"{{"bloch": [{}, 0, {}]}}"#, theta.sin(), theta.cos()),
    );
    for a in ["0.1", "0.5", "0.9"] {
        let out = run(tre().args(["pure", "--t", &t.to_string(), "--a", a]));
        assert_eq!(out.status.code(), Some(0));
        let pure: Value = serde_json::from_slice(&out.stdout).unwrap();
        let (_, full) = compute(&r, &s, &["--a", a]);
        assert!((num(&pure, "s_a") - num(&full, "s_a")).abs() <= 1e-9, "a {a}");
        assert!((num(&pure, "limit") - t * t).abs() <= 1e-15);
    }
}

#[test]
fn figure_csv() {
    let out = run(tre().args(["figure", "fig1a", "--points", "11"]));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    let header = lines.next().unwrap();
    assert_eq!(header, "x,a=0.01,a=0.1,a=0.3,a=0.5,a=0.7,a=0.9");
    assert_eq!(lines.count(), 11);

    let dir = TempDir::new().unwrap();
    let path = dir.path().join("fig.csv");
    let out = run(tre().args(["figure", "fig2b", "--out"]).arg(&path));
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().nth(1), Some("a,s_a"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let r = write(dir.path(), "r.json", r#"{"diag": [1.0, 0.0]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"diag": [0.7, 0.7]}"#);
    assert_eq!(
        run(tre().args(["compute", "--a", "0.5", "--rho"]).arg(&r))
            .status
            .code(),
        Some(2)
    );
    let out = run(tre()
        .args(["compute", "--a", "0.5", "--rho"])
        .arg(&r)
        .arg("--sigma")
        .arg(&bad));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));
    let out = run(tre()
        .args(["compute", "--a", "1.5", "--rho"])
        .arg(&r)
        .arg("--sigma")
        .arg(&r));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        run(tre().args(["pure", "--t", "2", "--a", "0.5"])).status.code(),
        Some(2)
    );

    let verify = ["verify", "--dims", "2", "--trials", "8"];
    assert_eq!(run(tre().args(verify)).status.code(), Some(0));
    let out = run(tre().args(verify).arg("--slack=-1"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn seed_from_environment() {
    let args = ["verify", "--dims", "2,3", "--trials", "12"];
    let by_flag = run(tre().args(args).args(["--seed", "5"])).stdout;
    let by_env = run(tre().args(args).env("TRE_SEED", "5")).stdout;
    let other = run(tre().args(args).env("TRE_SEED", "6")).stdout;
    assert_eq!(by_flag, by_env);
    assert_ne!(by_env, other);
    let report: Value = serde_json::from_slice(&by_env).unwrap();
    assert_eq!(report["config"]["seed"], 5);
}
