use std::fs;
use std::path::Path;
use std::process::Command;

use dg_gauge::cli::io::{read_state, write_state};
use dg_gauge::cli::{load_config, parse_config, run, RunOptions};
use dg_gauge::fields::{Grid, Wavefunction};
use num_complex::Complex64;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_dg-gauge");

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn result_json(dir: &Path, prefix: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{prefix}_result.json"))).unwrap()).unwrap()
}

const LINEAR: &str = r#"{"nu1": -0.5, "nu2": 0, "mu0": 1, "mu1": 0, "mu2": -0.25, "mu3": 0.5, "mu4": 0, "mu5": 0.125}"#;

#[test]
fn invariants_mode_reports_linear_leaf() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &format!(r#"{{"mode": "invariants", "family_params": {LINEAR}, "output": "inv"}}"#));
    let status = Command::new(BIN).arg(&cfg).arg("--output").arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let r = result_json(dir.path(), "inv");
    assert_eq!(r["invariants"]["iota0"], -0.5);
    assert_eq!(r["invariants"]["iota1"], 0.125);
    for k in 2..=5 {
        assert_eq!(r["invariants"][format!("iota{k}")], 0.0);
    }
    assert_eq!(r["seed"], 0);
}

#[test]
fn classify_mode_finds_lambda_two() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"mode": "classify", "output": "cls",
      "dg_params": {"hbar": 1, "mass": 1, "D": 0, "Dprime": 0.1875, "c2": 1, "c5": -0.5}}"#;
    let cfg = write(dir.path(), "c.json", doc);
    let status = Command::new(BIN).arg(&cfg).arg("--output").arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let r = result_json(dir.path(), "cls");
    assert_eq!(r["classification"], "linearizable");
    assert!((r["gauge"]["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(r["gauge"]["gamma"], 0.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let bad_json = write(out, "bad.json", "{\"mode\": ");
    assert_eq!(Command::new(BIN).arg(&bad_json).status().unwrap().code(), Some(2));
    assert_eq!(Command::new(BIN).arg(out.join("missing.json")).status().unwrap().code(), Some(2));
    let both = write(
        out,
        "both.json",
        &format!(r#"{{"mode": "invariants", "family_params": {LINEAR}, "dg_params": {{"hbar": 1, "mass": 1, "D": 0, "Dprime": 0}}}}"#),
    );
    let o = Command::new(BIN).arg(&both).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parameters"));
    let unstable = write(
        out,
        "dt.json",
        &format!(r#"{{"mode": "evolve", "family_params": {LINEAR}, "evolution": {{"dt": 0.5}}, "output": "x"}}"#),
    );
    assert_eq!(Command::new(BIN).arg(&unstable).arg("--output").arg(out).status().unwrap().code(), Some(2));

    // a node in the initial state is a numerical failure
    let node = Wavefunction::from_fn(Grid::new(16, 6.0).unwrap(), |x| Complex64::new(x, 0.3)).unwrap();
    let mut values = node.into_values();
    values[8] = Complex64::new(0.0, 0.0);
    write_state(&out.join("node.txt"), &Wavefunction::new(Grid::new(16, 6.0).unwrap(), values).unwrap()).unwrap();
    let nodal = write(
        out,
        "node.json",
        &format!(
            r#"{{"mode": "evolve", "family_params": {LINEAR}, "grid": {{"n": 16, "length": 6}},
                "initial_state": {{"kind": "file", "path": "node.txt"}}, "evolution": {{"rho_floor": 0}}, "output": "n"}}"#
        ),
    );
    assert_eq!(Command::new(BIN).arg(&nodal).arg("--output").arg(out).status().unwrap().code(), Some(1));
}

#[test]
fn evolve_writes_series_states_and_result() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"mode": "evolve",
      "dg_params": {"hbar": 1, "mass": 1, "D": 0.05, "Dprime": 1, "c1": 0.05, "c4": -0.05},
      "grid": {"n": 128, "length": 30},
      "potential": {"kind": "harmonic", "k": 0.5},
      "evolution": {"dt": 0.002, "t_end": 0.1, "record_every": 10},
      "output": "ev"}"#;
    let cfg = parse_config(doc).unwrap();
    let summary = run(&cfg, &RunOptions { seed: 9, output_dir: Some(dir.path().to_path_buf()) }).unwrap();
    assert_eq!(summary.files.len(), 1 + 6 + 1);
    let series = fs::read_to_string(dir.path().join("ev_series.csv")).unwrap();
    let mut lines = series.lines();
    assert_eq!(lines.next(), Some("# seed=9"));
    assert_eq!(lines.next(), Some("t,norm,energy,l2_error"));
    assert_eq!(lines.count(), 6);
    let r = result_json(dir.path(), "ev");
    assert!(r["mass_drift"].as_f64().unwrap() < 1e-8);
    assert!(r["continuity_defect"].as_f64().unwrap() < 1e-3);
    let last = read_state(&dir.path().join("ev_state_5.txt")).unwrap();
    assert_eq!(last.grid(), &cfg.grid);
}

#[test]
fn transform_then_reload_and_invert() {
    let dir = tempfile::tempdir().unwrap();
    let doc = format!(
        r#"{{"mode": "transform", "family_params": {LINEAR}, "gauge": {{"lambda": 2, "gamma": 1}},
            "grid": {{"n": 64, "length": 12}}, "initial_state": {{"kind": "gaussian", "sigma0": 1, "k0": 0.5}},
            "output": "fwd"}}"#
    );
    let cfg = write(dir.path(), "fwd.json", &doc);
    run(&load_config(&cfg).unwrap(), &RunOptions { seed: 0, output_dir: Some(dir.path().to_path_buf()) }).unwrap();
    let r = result_json(dir.path(), "fwd");
    assert_eq!(r["primed_params"]["nu1"], -0.25);
    assert!(r["max_density_change"].as_f64().unwrap() < 1e-15);

    let back = format!(
        r#"{{"mode": "transform", "family_params": {LINEAR}, "gauge": {{"lambda": 0.5, "gamma": -0.5}},
            "grid": {{"n": 64, "length": 12}}, "initial_state": {{"kind": "file", "path": "fwd_state_0.txt"}},
            "output": "back"}}"#
    );
    let cfg = write(dir.path(), "back.json", &back);
    run(&load_config(&cfg).unwrap(), &RunOptions { seed: 0, output_dir: Some(dir.path().to_path_buf()) }).unwrap();
    let restored = read_state(&dir.path().join("back_state_0.txt")).unwrap();
    let original = Wavefunction::gaussian(Grid::new(64, 12.0).unwrap(), 1.0, 0.0, 0.5).unwrap();
    assert!(restored.l2_distance(&original).unwrap() < 1e-13);
}

#[test]
fn state_files_round_trip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::new(100, 7.3).unwrap();
    let psi = Wavefunction::from_fn(grid, |x| Complex64::new((x * 1.7).sin() / 3.0, (-x * x).exp() * 1e-200)).unwrap();
    let path = dir.path().join("s.txt");
    write_state(&path, &psi).unwrap();
    let back = read_state(&path).unwrap();
    assert_eq!(back.grid(), psi.grid());
    assert!(back.values().iter().zip(psi.values()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"mode": "commute",
      "dg_params": {"hbar": 1, "mass": 1, "D": 0.05, "Dprime": 1, "c1": 0.05, "c4": -0.05},
      "grid": {"n": 128, "length": 30},
      "evolution": {"dt": 0.002, "t_end": 0.05, "record_every": 5},
      "output": "c"}"#;
    let cfg = write(dir.path(), "c.json", doc);
    let verify = write(dir.path(), "v.json", r#"{"mode": "verify", "output": "v"}"#);
    let mut runs = Vec::new();
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        for c in [&cfg, &verify] {
            let s = Command::new(BIN).arg(c).arg("--seed").arg("17").arg("--output").arg(&out).status().unwrap();
            assert_eq!(s.code(), Some(0));
        }
        let files = ["c_series.csv", "c_result.json", "c_state_0.txt", "c_state_1.txt", "v_result.json"];
        runs.push(files.map(|f| fs::read(out.join(f)).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
    assert!(String::from_utf8_lossy(&runs[0][0]).starts_with("# seed=17\n"));
    let v: Value = serde_json::from_slice(&runs[0][4]).unwrap();
    assert_eq!(v["seed"], 17);
    assert_eq!(v["failed"], 0);
}
