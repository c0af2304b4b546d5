use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tscat_cli::config::Config;

fn tscat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tscat")).args(args).env_remove("TS_EVAL_TOL").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn write_config(dir: &TempDir, name: &str, json: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn funnel_resonances_in_small_disk() {
    let o = tscat(&["resonances", "--end", "funnel:0", "--radius", "1.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "re,im,multiplicity\n-1,0,2\n-1,-1,2\n-1,1,2\n");
}

#[test]
fn empty_disk_gives_header_only() {
    let o = tscat(&["resonances", "--end", "funnel:0", "--radius", "0.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "re,im,multiplicity\n");
}

#[test]
fn cusp_pole_at_one_half() {
    let o = tscat(&["resonances", "--end", "cusp:0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "re,im,multiplicity\n0.5,0,1\n");
}

#[test]
fn resonance_rows_are_sorted() {
    let o = tscat(&["resonances", "--end", "all", "--radius", "12"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert!(r.len() > 10);
    for w in r.windows(2) {
        let key = |v: &Vec<f64>| (v[0].hypot(v[1]), v[0], v[1]);
        assert!(key(&w[0]) < key(&w[1]), "{:?} then {:?}", w[0], w[1]);
    }
}

#[test]
fn smatrix_is_unitary_on_critical_line() {
    let o = tscat(&["grid", "--op", "smatrix", "--mode", "0:1", "--re", "0.5:0.5:1", "--im", "-6:6:25"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 25);
    for v in r {
        assert!((v[2].hypot(v[3]) - 1.0).abs() < 1e-10, "{v:?}");
    }
}

#[test]
fn grid_has_nan_at_resonance() {
    let o = tscat(&["grid", "--op", "smatrix", "--re", "-1:0:3", "--im", "0:0:1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("-1,0,nan,nan"), "{text}");
    assert!(!text.lines().nth(3).unwrap().contains("nan"));
}

#[test]
fn product_over_single_point() {
    let dir = TempDir::new().unwrap();
    let ms = dir.path().join("ms.csv");
    std::fs::write(&ms, "re,im,multiplicity\n-1,0,1\n").unwrap();
    let o = tscat(&["grid", "--op", "product", "--multiset", ms.to_str().unwrap(), "--re", "1:1:1", "--im", "0:0:1"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r[0][0..2], [1.0, 0.0]);
    assert!((r[0][2] - 2.0 * (-0.5f64).exp()).abs() < 1e-12);
    assert_eq!(r[0][3], 0.0);
}

#[test]
fn grid_output_goes_to_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("grid.csv");
    let args = ["grid", "--op", "reduced", "--mode", "0:2", "--re", "-2:3:11", "--im", "-3:3:13"];
    let o = tscat(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), tscat(&args).stdout);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["grid", "--op", "poisson", "--mode", "0:1", "--r", "1.5", "--re", "-2:2:9", "--im", "-2:2:9"];
    let a = tscat(&args);
    let b = tscat(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains(&b'\r'));
}

#[test]
fn winding_examples() {
    let dir = TempDir::new().unwrap();
    let run = |cfg: Option<&str>, center: &str| {
        let mut args = vec!["winding", "--target", "reduced", "--mode", "0:0", "--center", center, "--radius", "0.2"];
        if let Some(c) = cfg {
            args.extend(["--config", c]);
        }
        let o = tscat(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    assert_eq!(run(None, "-1"), "-2\n");
    let twisted = write_config(&dir, "t.json", r#"{"funnels": [{"length": "2pi", "phases": [0.3]}]}"#);
    assert_eq!(run(Some(&twisted), "-1+0.3i"), "-1\n");
    assert_eq!(run(None, "0"), "0\n");
}

#[test]
fn winding_through_a_pole_is_numerical_failure() {
    let o = tscat(&["winding", "--target", "reduced", "--center", "-1.2", "--radius", "0.2"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_exit_codes() {
    let o = tscat(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.as_array().unwrap().iter().all(|r| r["passed"] == true));

    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "p.json",
        r#"{"funnels": [{"length": "2pi", "phases": [0]}], "test_hooks": {"beta_perturbation": 0.001}}"#,
    );
    assert_eq!(tscat(&["verify", "--config", &cfg, "--suite", "funnel"]).status.code(), Some(1));
    assert_eq!(tscat(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn invalid_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "bad.json", r#"{"funnels": [], "cusps": [{"phases": [0]}], "extra": 1}"#);
    assert_eq!(tscat(&["count", "--radius", "3", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(tscat(&["count", "--radius", "3", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(tscat(&["resonances", "--end", "tube:0", "--radius", "1"]).status.code(), Some(2));
    assert_eq!(tscat(&["grid", "--op", "cube", "--re", "0:1:2", "--im", "0:1:2"]).status.code(), Some(2));
    assert_eq!(tscat(&["grid", "--op", "smatrix", "--re", "0:1", "--im", "0:1:2"]).status.code(), Some(2));
    assert_eq!(tscat(&["grid", "--op", "symbol", "--mode", "0:0", "--re", "2:2:1", "--im", "0:0:1"]).status.code(), Some(2));
    assert_eq!(tscat(&["bogus"]).status.code(), Some(2));
}

#[test]
fn eval_tolerance_from_environment() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_tscat"))
            .args(["grid", "--op", "smatrix", "--mode", "0:1", "--re", "2:2:1", "--im", "1:1:1"])
            .env("TS_EVAL_TOL", tol)
            .output()
            .unwrap()
    };
    assert!(run("1e-12").status.success());
    assert_eq!(run("banana").status.code(), Some(2));
    assert_eq!(run("-1").status.code(), Some(2));
}

#[test]
fn count_matches_resonance_listing() {
    let o = tscat(&["count", "--radius", "7.5"]);
    let n: usize = stdout(&o).trim().parse().unwrap();
    let listing = tscat(&["resonances", "--end", "funnel:0", "--radius", "7.5"]);
    let total: f64 = rows(&stdout(&listing)).iter().map(|r| r[2]).sum();
    assert_eq!(n, total as usize);
}

#[test]
fn config_round_trips() {
    let dir = TempDir::new().unwrap();
    let json = r#"{"funnels": [{"length": "pi/3", "phases": ["3/10", 0.25, 0]}, {"length": 4.5, "phases": ["1/2"]}],
                   "cusps": [{"phases": [0, "1/3"]}], "seed": 7}"#;
    let cfg = write_config(&dir, "c.json", json);
    let first = tscat(&["config", "--config", &cfg]);
    assert!(first.status.success());
    let again = write_config(&dir, "c2.json", &stdout(&first));
    let second = tscat(&["config", "--config", &again]);
    assert_eq!(first.stdout, second.stdout);
    let a = Config::from_json(json).unwrap();
    let b = Config::from_json(&stdout(&first)).unwrap();
    assert_eq!(a, b);
    assert!(Path::new(&again).exists());
}
