// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn segdetect(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segdetect"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Data rows of a CSV output as header -> value maps.
fn rows(path: &Path) -> Vec<Vec<(String, String)>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).unwrap();
    let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    r.records()
        .map(|rec| headers.iter().cloned().zip(rec.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn field<'a>(row: &'a [(String, String)], key: &str) -> &'a str {
    &row.iter().find(|(k, _)| k == key).unwrap().1
}

const PLANTED: &str = "x,y\n0.1,0\n0.2,0\n0.3,1\n0.4,1\n0.5,1\n0.6,1\n0.7,0\n0.8,0\n";

#[test]
fn detect_on_planted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "planted.csv", PLANTED);
    let cfg = write(
        dir.path(),
        "scan.json",
        r#"{"data": {"kind": "file", "path": "planted.csv"}, "test": {"kind": "scan"}, "h": 0.25}"#,
    );
    let out = dir.path().join("out");
    let o = segdetect(&["detect"], &cfg, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&out.join("detect.csv"));
    assert_eq!(field(&r[0], "reject"), "true");
    assert_eq!(field(&r[0], "statistic").parse::<f64>().unwrap(), 2.0);
    assert_eq!((field(&r[0], "window_k"), field(&r[0], "window_l")), ("3", "7"));
}

#[test]
fn infeasible_scan_is_data_not_failure() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "planted.csv", PLANTED);
    let cfg = write(
        dir.path(),
        "scan.toml",
        "h = 0.9\ntest = { kind = \"scan\" }\ndata = { kind = \"file\", path = \"planted.csv\" }\n",
    );
    let out = dir.path().join("out");
    let o = segdetect(&["detect"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&out.join("detect.csv"));
    assert_eq!(field(&r[0], "feasible"), "false");
    assert_eq!(field(&r[0], "reject"), "false");
    assert_eq!(field(&r[0], "statistic"), "");
}

#[test]
fn affinity_prints_five_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "aff.json",
        r#"{"design": "dd", "n": 100, "sigma": 1.0, "g1": {"empty": true}, "g2": {"a": 0.0, "b": 0.1}}"#,
    );
    let o = segdetect(&["affinity"], &cfg, &dir.path().join("out"));
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("0.28650 "));
}

#[test]
fn risk_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s0.json",
        r#"{"design": "dd", "n_grid": [100, 200], "noise": {"family": "gaussian", "sigma": 0.5},
            "estimator": {"kind": "lse_changepoint"}, "class": {"kind": "S0"},
            "truth_grid": [{"kind": "fixed", "a": 0.0, "b": 0.5}, {"kind": "fixed", "a": 0.0, "b": 0.3}],
            "replications": 200}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(segdetect(&["risk", "--seed", "7"], &cfg, out).status.success());
    }
    for name in ["risk.csv", "risk_truths.csv", "risk_fit.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let text = fs::read_to_string(a.join("risk.csv")).unwrap();
    assert!(text.contains("# seed: 7"));
    assert!(text.contains("\"master_seed\":7"));
    assert!(a.join("risk.runtime").exists());
    let other = dir.path().join("c");
    assert!(segdetect(&["risk", "--seed", "8"], &cfg, &other).status.success());
    assert_ne!(fs::read(a.join("risk.csv")).unwrap(), fs::read(other.join("risk.csv")).unwrap());
}

#[test]
fn simulate_then_estimate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let sim = write(
        dir.path(),
        "sim.json",
        r#"{"design": "dd", "n": 40, "truth": {"kind": "fixed", "a": 0.25, "b": 0.75}, "noise": {"family": "none"}}"#,
    );
    assert!(segdetect(&["simulate"], &sim, dir.path()).status.success());
    let est = write(
        dir.path(),
        "est.json",
        r#"{"data": {"kind": "file", "path": "sample.csv"}, "estimator": {"kind": "lse_segment"}}"#,
    );
    let out = dir.path().join("est");
    assert!(segdetect(&["estimate"], &est, &out).status.success());
    let r = rows(&out.join("estimate.csv"));
    assert_eq!(field(&r[0], "a").parse::<f64>().unwrap(), 0.25);
    assert_eq!(field(&r[0], "b").parse::<f64>().unwrap(), 0.75);
    assert_eq!(field(&r[0], "sym_diff"), "");
}

#[test]
fn estimate_reports_stage_info_and_truth_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "est.json",
        r#"{"data": {"kind": "simulated", "design": "dd", "n": 20, "truth": {"kind": "fixed", "a": 0.2, "b": 0.8},
                     "noise": {"family": "none"}},
            "estimator": {"kind": "min_length", "mu": 0.5}}"#,
    );
    let out = dir.path().join("out");
    let o = segdetect(&["estimate", "--format", "json"], &cfg, &out);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("estimate.json")).unwrap()).unwrap();
    let row = &doc["tables"]["estimate"][0];
    assert_eq!(row["a"], 0.25);
    assert_eq!(row["b"], 0.75);
    assert_eq!(row["pilot_size"], 10);
    assert!((row["sym_diff"].as_f64().unwrap() - 0.1).abs() < 1e-12);
}

#[test]
fn config_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", "{\n  \"design\": \"dd\",\n  \"nn\": 5\n}\n");
    let o = segdetect(&["affinity"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json:3:"), "{err}");

    let mismatch = write(
        dir.path(),
        "mismatch.toml",
        "design = \"dd\"\nn_grid = [10]\nreplications = 1\nnoise = { family = \"none\" }\n\
         estimator = { kind = \"lse_segment\" }\nclass = { kind = \"S0\" }\ntruth_grid = [{ kind = \"empty\" }]\n",
    );
    assert_eq!(segdetect(&["risk"], &mismatch, &dir.path().join("out")).status.code(), Some(2));
    assert_eq!(segdetect(&["risk"], &dir.path().join("missing.json"), dir.path()).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "aff.json",
        r#"{"design": "rd", "n": 3, "sigma": 1.0, "g1": {"empty": true}, "g2": {"a": 0.0, "b": 0.1}}"#,
    );
    let blocker = write(dir.path(), "file", "");
    assert_eq!(segdetect(&["affinity"], &cfg, &blocker).status.code(), Some(3));
}

#[test]
fn separation_tail_and_oracle_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let sep = write(
        dir.path(),
        "sep.json",
        r#"{"design": "dd", "n_grid": [100, 400], "noise": {"family": "none"}, "test": {"kind": "anchored"},
            "h": 0.1, "alternatives": {"positions": [0.0]}, "replications": 5}"#,
    );
    let out = dir.path().join("sep");
    assert!(segdetect(&["separation"], &sep, &out).status.success());
    let r = rows(&out.join("separation.csv"));
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|row| field(row, "gamma") == "0"));

    let tail = write(
        dir.path(),
        "tail.json",
        r#"{"design": "dd", "n": 200, "noise": {"family": "gaussian", "sigma": 0.5},
            "estimator": {"kind": "lse_changepoint"}, "class": {"kind": "S0"},
            "truth": {"kind": "fixed", "a": 0.0, "b": 0.5}, "replications": 100, "x_grid": [1, 2, 4]}"#,
    );
    let out = dir.path().join("tail");
    assert!(segdetect(&["tail"], &tail, &out).status.success());
    let r = rows(&out.join("tail.csv"));
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|row| !field(row, "envelope").is_empty()));

    let oracle = write(dir.path(), "oracle.json", r#"{"samples": 100}"#);
    let o = segdetect(&["oracle-check"], &oracle, &dir.path().join("oracle"));
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("0 segment mismatches"));
}

#[test]
fn shipped_configs_run() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut count = 0;
    for entry in fs::read_dir(&configs).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let sub = match stem.split('_').next().unwrap() {
            "oracle" => "oracle-check",
            s => s,
        }
        .to_string();
        let o = segdetect(&[sub.as_str()], &path, &dir.path().join(&stem));
        assert!(o.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
        count += 1;
    }
    assert!(count >= 8);
}
