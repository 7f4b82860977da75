//! End-to-end runs of the `qwpath` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qwpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwpath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut all = args.to_vec();
    all.extend(["--out", out]);
    qwpath(&all)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path
}

/// Rows of a CSV as strings, header first.
fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let table = rows(path);
    let idx = table[0].iter().position(|h| h == name).unwrap();
    table[1..].iter().map(|r| r[idx].parse().unwrap()).collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const EHRENFEST_2: &str = r#"{"chain": [1.0, 0.5, 0.0]}"#;

#[test]
fn spectrum_of_ehrenfest_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), EHRENFEST_2);
    let o = run_in(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lambda = column(&dir.path().join("chain_spectrum.csv"), "lambda");
    for (got, want) in lambda.iter().zip([1.0, 0.0, -1.0]) {
        assert!((got - want).abs() < 1e-12, "{lambda:?}");
    }
    let header = &rows(&dir.path().join("chain_spectrum.csv"))[0];
    assert_eq!(header, &["m", "lambda", "phi_0", "phi_1", "phi_2"]);
    let walk = dir.path().join("walk_spectrum.csv");
    assert_eq!(rows(&walk)[0], ["index", "re_mu", "im_mu", "residual"]);
    assert_eq!(rows(&walk).len(), 5);
    assert!(column(&walk, "residual").iter().all(|&r| r <= 1e-10));
}

#[test]
fn malformed_json_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "{\n  \"chain\": [0.5,\n}");
    let o = run_in(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn empty_path_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"chain": [1.0, 0.0]}"#);
    let o = run_in(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("n >= 1"), "{}", stderr(&o));
}

#[test]
fn invalid_coin_names_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"coins": [[[0.6, 0], [0.8, 0]], [[1, 0], [0, 0]]]}"#);
    let o = run_in(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("x=2"), "{}", stderr(&o));
}

#[test]
fn average_all_compares_methods() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), EHRENFEST_2);
    let o = run_in(
        dir.path(),
        &["average", "--config", cfg.to_str().unwrap(), "--method", "all", "--steps", "1000"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for m in ["theorem", "szegedy", "spectral", "cesaro"] {
        let p = column(&dir.path().join(format!("average_{m}.csv")), "p");
        for (got, want) in p.iter().zip([0.25, 0.5, 0.25]) {
            assert!((got - want).abs() < 1e-2, "{m}: {p:?}");
        }
    }
    let cmp = rows(&dir.path().join("comparison.csv"));
    assert_eq!(cmp[0], ["a", "b", "sup_diff"]);
    let theorem_spectral = cmp
        .iter()
        .find(|r| r[0] == "theorem" && r[1] == "spectral")
        .unwrap();
    assert!(theorem_spectral[2].parse::<f64>().unwrap() <= 1e-8);
    let script = fs::read_to_string(dir.path().join("plot_average.py")).unwrap();
    assert!(script.contains("average_theorem.csv"));
    assert!(dir.path().join("run_summary.json").exists());
}

#[test]
fn szegedy_needs_opposite_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"chain": [0.5, 0.5], "nu1": [1, 0], "nu2": [0, 1]}"#);
    let o = run_in(dir.path(), &["average", "--config", cfg.to_str().unwrap(), "--method", "szegedy"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nu2 = -nu1"), "{}", stderr(&o));
}

#[test]
fn cesaro_requires_steps_and_starts_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"chain": [0.3, 0.7, 0.4]}"#);
    let cfg = cfg.to_str().unwrap();
    let o = run_in(dir.path(), &["average", "--config", cfg, "--method", "cesaro"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--steps"));

    let o = run_in(dir.path(), &["average", "--config", cfg, "--method", "cesaro", "--steps", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = column(&dir.path().join("average_cesaro.csv"), "p");
    assert_eq!(p, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn unknown_method_is_rejected() {
    let o = qwpath(&["average", "--N", "3", "--method", "median", "--out", "/nonexistent/never"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("median"));
}

#[test]
fn stationary_ehrenfest_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), EHRENFEST_2);
    let o = run_in(dir.path(), &["stationary", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m0 = column(&dir.path().join("stationary_m0.csv"), "p");
    let m1 = dir.path().join("stationary_m1.csv");
    assert_eq!(rows(&m1)[0], ["x", "p", "max_deviation"]);
    for (got, want) in column(&m1, "p").iter().zip([0.25, 0.5, 0.25]) {
        assert!((got - want).abs() < 1e-12);
    }
    // m = 0 is the reversible measure of the Ehrenfest chain.
    for (got, want) in m0.iter().zip([0.25, 0.5, 0.25]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!(column(&m1, "max_deviation").iter().all(|&d| d <= 1e-10));
    assert!(!dir.path().join("stationary_m2.csv").exists());
}

#[test]
fn stationary_random_instances() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        r#"{"chain": [0.2, 0.7, 0.4, 0.9], "nu1": {"angle": 0.3}, "nu2": {"angle": 2.5}, "phases": [0.1, 1.2, -0.7, 2.0]}"#,
        r#"{"chain": [0.5, 0.5, 0.5, 0.5, 0.5, 0.5], "nu1": [0, 1], "nu2": [-1, 0]}"#,
        r#"{"coins": [[[0.6, 0.0], [0.0, 0.8]], [[0.0, 0.28], [0.96, 0.0]], [[-0.8, 0.0], [0.0, 0.6]]], "nu1": {"angle": 1.0}, "nu2": {"angle": -1.5}}"#,
    ];
    for text in configs {
        let cfg = write_config(dir.path(), text);
        let o = run_in(dir.path(), &["stationary", "--config", cfg.to_str().unwrap()]);
        assert!(o.status.success(), "{text}: {}", stderr(&o));
    }
}

#[test]
fn ehrenfest_exact_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["ehrenfest", "--N", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = rows(&dir.path().join("ehrenfest_N3.csv"));
    assert_eq!(table[0], ["x", "p", "p_rational", "arcsine", "arcsine_rational"]);
    let exact: Vec<&str> = table[1..].iter().map(|r| r[2].as_str()).collect();
    assert_eq!(exact, ["11/64", "21/64", "21/64", "11/64"]);

    let o = qwpath(&["ehrenfest", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let text = r#"{"chain": [0.3, 0.6, 0.2], "nu1": {"angle": 0.4}, "nu2": [0, -1], "method": "all", "steps": 500}"#;
    for dir in [a.path(), b.path()] {
        let cfg = dir.join("in.json");
        fs::write(&cfg, text).unwrap();
        let cfg = cfg.to_str().unwrap();
        for cmd in ["spectrum", "average", "stationary"] {
            let o = run_in(dir, &[cmd, "--config", cfg]);
            assert!(o.status.success(), "{cmd}: {}", stderr(&o));
        }
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() > 5);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn selftest_passes() {
    let o = qwpath(&["selftest", "--seed", "11"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("[PASS]"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn help_and_bad_flags() {
    assert_eq!(qwpath(&["--help"]).status.code(), Some(0));
    assert_eq!(qwpath(&["spectrum", "--bogus"]).status.code(), Some(1));
    assert_eq!(qwpath(&[]).status.code(), Some(1));
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = qwpath(&["ehrenfest", "--N", "2", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}
