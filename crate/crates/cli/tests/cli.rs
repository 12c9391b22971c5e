use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn pphull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pphull")).args(args).env("PPHULL_LOG", "error").output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    let out = dir.to_str().unwrap();
    all.extend(["--out", out]);
    pphull(&all)
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn check_report(dir: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{command}.json"))).unwrap();
    let report: Value = serde_json::from_str(&text).unwrap();
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_dir().join(format!("{command}.schema.json"))).unwrap()).unwrap();
    if let Err(e) = jsonschema::validate(&schema, &report) {
        panic!("{command}.json violates its schema: {e}");
    }
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    let csv = std::fs::read_to_string(dir.join(format!("{command}.csv"))).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.iter().rev().take(2).collect::<Vec<_>>(), ["version", "config_hash"]);
    for row in reader.records() {
        let row = row.unwrap();
        assert_eq!(row.len(), header.len());
        assert_eq!(&row[row.len() - 2], report["config_hash"].as_str().unwrap());
    }
    report
}

fn ok(o: &Output) {
    assert!(o.status.success(), "stdout: {}\nstderr: {}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
}

#[test]
fn every_subcommand_writes_valid_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let runs: [(&str, Vec<&str>); 7] = [
        ("decompose", vec!["decompose", "--function", "laurent-example", "--radius", "0.6"]),
        ("fekete", vec!["fekete", "--m", "12"]),
        ("approx", vec!["approx", "--function", "two-pole", "--sample", "segment", "--segment-start", "0.2", "--segment-end", "0.6", "--m", "2", "--schedule", "2:1,2:2,2:3", "--cluster-link", "0.02"]),
        ("psh", vec!["psh", "--function", "gaussian-poles", "--n-max", "6", "--nu-max", "2", "--cluster-link", "1", "--precision", "f64"]),
        ("thin", vec!["thin", "--function", "gaussian-poles", "--threshold", "1", "--witness"]),
        ("hmeasure", vec!["hmeasure", "--annulus", "0.1,1", "--at", "0.4", "--walks", "2000"]),
        ("hull", vec!["hull", "--function", "gaussian-poles", "--r-grid", "1,2,4", "--series", "--vn-threshold", "1"]),
    ];
    for (command, args) in runs {
        let o = run_in(d, &args);
        ok(&o);
        check_report(d, command);
    }
}

#[test]
fn hull_example_reports_empty_fiber() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["hull", "--function", "exp-reciprocal", "--point", "0", "--r-grid", "e,e2,e10"]);
    ok(&o);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FIBER_EMPTY"));
    let report = check_report(dir.path(), "hull");
    assert_eq!(report["result"]["verdict"]["per_singular_point"][0]["classification"]["kind"], "FIBER_EMPTY");
}

#[test]
fn hmeasure_example_matches_annulus_oracle() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run_in(dir.path(), &["hmeasure", "--annulus", "0.1,1", "--at", "0.4", "--walks", "100000", "--seed", "7"]));
    let text = std::fs::read_to_string(dir.path().join("hmeasure.csv")).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    let value: f64 = rows[0][2].parse().unwrap();
    let oracle = (1.0f64 / 0.4).ln() / (1.0f64 / 0.1).ln();
    assert!((value - oracle).abs() < 0.02, "{value} vs {oracle}");
    assert_eq!(&rows[0][5], "7");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "seed = 11\n[function]\npreset = \"gaussian-poles\"\nn_max = 12\n[thin]\nthreshold = 1\ndepth = 30\npoint = [0, 0]\n",
    )
    .unwrap();
    ok(&run_in(dir.path(), &["thin", "--config", cfg.to_str().unwrap(), "--depth", "25"]));
    let r = check_report(dir.path(), "thin");
    assert_eq!(r["config"]["seed"], 11);
    assert_eq!(r["config"]["params"]["depth"], 25);
    assert_eq!(r["config"]["params"]["function"]["n_max"], 12);
    assert_eq!(r["result"]["report"]["depth"], 25);
}

#[test]
fn malformed_config_exits_one_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    let cfg = dir.path().join("bad.toml");
    for text in ["[thin\nthreshold = 1", "[thin]\nthreshold = \"many\"\n[function]\npreset = \"exp-reciprocal\"", "[thin]\ncolour = 3", "[function]\npreset = \"no-such\"\n[thin]\nthreshold = 3"] {
        std::fs::write(&cfg, text).unwrap();
        let o = pphull(&["thin", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{text}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists());
    }
    let o = pphull(&["hull", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn numeric_failure_exits_two_with_module_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    // the linearised zero disks of 1/sin(pi/z) are not certified below R = 4
    let o = pphull(&["thin", "--function", "recip-sin-pi", "--threshold", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("numeric failure"));
    assert!(!out.exists());
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["hmeasure", "--annulus", "0.2,1", "--at", "0.5", "--walks", "5000", "--seed", "3"];
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = args.to_vec();
    four.extend(["--threads", "4"]);
    ok(&run_in(a.path(), &one));
    ok(&run_in(b.path(), &four));
    for f in ["hmeasure.json", "hmeasure.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn help_and_version_succeed() {
    assert!(pphull(&["--help"]).status.success());
    let v = pphull(&["--version"]);
    assert!(v.status.success());
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}
