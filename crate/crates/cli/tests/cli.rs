// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use csfq_core::config::DeviceConfig;

fn csfq(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csfq"))
        .args(args)
        .current_dir(dir)
        .env_remove("CSFQ_CONFIG")
        .output()
        .unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = csfq(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn published_points() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/paper-points.csv")
}

fn rows(csv_text: &str) -> Vec<Vec<String>> {
    csv_text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn value(stdout: &str, key: &str) -> f64 {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key)?.trim().strip_prefix('=').map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("no '{key}' in output:\n{stdout}"))
}

#[test]
fn spectrum_at_sweet_spot() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["spectrum", "--flux", "0.5"], dir.path());
    let r = rows(&out);
    assert_eq!(r[0], ["flux", "E1_GHz", "E2_GHz", "E3_GHz", "converged"]);
    let e1: f64 = r[1][1].parse().unwrap();
    assert!((e1 - 5.01).abs() <= 0.010);
    assert_eq!(r[1][4], "true");
}

#[test]
fn spectrum_range_is_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let script = dir.path().join("plot.py");
    ok(
        &["spectrum", "--flux-range", "0.45", "0.55", "11", "--levels", "1", "--cutoff", "8",
          "--csv", csv.to_str().unwrap(), "--plot-script", script.to_str().unwrap()],
        dir.path(),
    );
    let r = rows(&std::fs::read_to_string(&csv).unwrap());
    assert_eq!(r.len(), 12);
    let e1: Vec<f64> = r[1..].iter().map(|row| row[1].parse().unwrap()).collect();
    for k in 0..11 {
        assert!((e1[k] - e1[10 - k]).abs() <= 1e-6, "{} vs {}", e1[k], e1[10 - k]);
    }
    assert!(std::fs::read_to_string(script).unwrap().contains("sweep.csv"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["spectrum", "--levels", "0"][..],
        &["spectrum", "--flux-range", "0.55", "0.45", "11"],
        &["spectrum", "--flux-range", "0.45", "0.55", "1"],
        &["spectroscopy", "--teff", "0.1", "--order", "0"],
        &["fit", "--data", "x.csv", "--free", "i0,beta"],
        &["no-such-command"],
    ] {
        let out = csfq(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

fn peak_labels(stdout: &str) -> Vec<(String, String, String)> {
    stdout
        .lines()
        .skip_while(|l| !l.starts_with("center_GHz"))
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[3].to_string(), f[4].to_string(), f[5].to_string())
        })
        .collect()
}

fn single_photon(labels: &[(String, String, String)]) -> Vec<String> {
    labels.iter().filter(|l| l.2 == "1").map(|l| format!("{}->{}", l.0, l.1)).collect()
}

#[test]
fn spectroscopy_before_and_after() {
    let dir = tempfile::tempdir().unwrap();
    let hot = peak_labels(&ok(&["spectroscopy", "--teff", "0.175", "--csv", "hot.csv"], dir.path()));
    assert_eq!(single_photon(&hot), ["0->1", "1->2", "2->3"]);
    let trace = std::fs::read_to_string(dir.path().join("hot.csv")).unwrap();
    assert!(trace.starts_with("freq_GHz,amplitude\n"));
    assert_eq!(trace.lines().count(), 1502);
    let table = std::fs::read_to_string(dir.path().join("hot.peaks.csv")).unwrap();
    assert!(table.starts_with("center_GHz,width_GHz,height,i,j,order\n"));

    let cold = peak_labels(&ok(&["spectroscopy", "--teff", "0.015"], dir.path()));
    assert_eq!(single_photon(&cold), ["0->1"]);
    assert!(cold.contains(&("0".into(), "2".into(), "2".into())));

    let zero = peak_labels(&ok(&["spectroscopy", "--teff", "0", "--order", "1"], dir.path()));
    assert_eq!(zero.len(), 1);
}

#[test]
fn t1_versus_temperature() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        &["t1-temp", "--t1-base", "5.7e-6", "--t1-ref", "0.7e-6", "--temp-ref", "0.175",
          "--range", "0.015", "0.25", "48", "--csv", "t1.csv"],
        dir.path(),
    );
    let half = value(&out, "half_plateau_K");
    assert!((0.130..=0.165).contains(&half));
    let r = rows(&std::fs::read_to_string(dir.path().join("t1.csv")).unwrap());
    assert_eq!(r[0], ["temp_K", "T1_us", "gamma_qp_per_s", "gamma_total_per_s"]);
    let at = |t: f64| -> f64 {
        r[1..].iter().find(|row| (row[0].parse::<f64>().unwrap() - t).abs() < 1e-9).unwrap()[1].parse().unwrap()
    };
    assert!((at(0.175) - 0.7).abs() < 1e-6);
    assert!(((at(0.015) - 5.7) / 5.7).abs() <= 1e-3);
}

#[test]
fn t1_calibration_impossible() {
    let dir = tempfile::tempdir().unwrap();
    let out = csfq(&["t1-temp", "--t1-base", "5.7e-6", "--t1-ref", "5.7e-6"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("calibration"));
}

#[test]
fn fit_published_points() {
    let dir = tempfile::tempdir().unwrap();
    let data = published_points();
    let out = ok(
        &["fit", "--data", data.to_str().unwrap(), "--cutoff", "8", "--restarts", "1", "--out-config", "fitted.json"],
        dir.path(),
    );
    assert!(out.contains("converged = true"));
    assert!(value(&out, "residual_rms_MHz") <= 60.0);
    let fitted = DeviceConfig::load(dir.path().join("fitted.json")).unwrap();
    assert!((fitted.qubit.i0_ua - value(&out, "i0_uA")).abs() < 1e-8);
    assert_eq!(fitted.cavity, DeviceConfig::paper_default().cavity);
}

#[test]
fn fit_with_nothing_free_only_evaluates() {
    let dir = tempfile::tempdir().unwrap();
    let data = published_points();
    let out = ok(&["fit", "--data", data.to_str().unwrap(), "--free", "none", "--out-config", "same.json"], dir.path());
    assert_eq!(value(&out, "iterations"), 0.0);
    let back = DeviceConfig::load(dir.path().join("same.json")).unwrap();
    assert_eq!(back.to_params().unwrap(), DeviceConfig::paper_default().to_params().unwrap());
}

#[test]
fn malformed_observation_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "flux,i,j,freq_GHz\n0.5,0,1,5.01\n0.51,0,1,abc\n").unwrap();
    let out = csfq(&["fit", "--data", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&out.stderr));

    std::fs::write(&bad, "flux,i,j,freq_GHz\n0.5,0,1\n").unwrap();
    let out = csfq(&["fit", "--data", bad.to_str().unwrap()], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn report_headline_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["report"], dir.path());
    assert!(out.contains("nbar(5 GHz, 0.8 K): 2.86"), "{out}");
    assert!(out.contains("resonator Q = w_cav / kappa: 21915"));
    assert!(out.contains("stimulated") && out.contains("two_nbar"));
    let ratio: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("Purcell limit / measured T1: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((ratio - 166.0).abs() < 1.0);
    assert!(out.contains("Purcell T1 limit (us): 947.6"));
}

#[test]
fn missing_config_is_a_clean_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = csfq(&["report", "--config", "nope.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = DeviceConfig::paper_default();
    cfg.name = "from-env".into();
    let path = dir.path().join("env.json");
    cfg.save(&path).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_csfq"))
        .arg("report")
        .env("CSFQ_CONFIG", &path)
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("device: from-env"));
}

#[test]
fn run_record_written() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["--run-record", "run.json", "t1-temp", "--csv", "t1.csv"], dir.path());
    let rec: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(rec["command"], "t1-temp");
    assert_eq!(rec["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(rec["outputs"][0], "t1.csv");
    assert!(rec["wall_time_s"].as_f64().unwrap() >= 0.0);
}
