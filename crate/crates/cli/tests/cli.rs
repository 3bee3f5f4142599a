use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qldrift_cli::acceptance::{criterion_1, criterion_8, AcceptanceOptions, Level};
use tempfile::TempDir;

const SMALL: &str = "\
spectrum.M = 8
spectrum.N = 4
grid.steps_per_period = 512
grid.record_every = 8
run.repetitions = 6
run.suites = []
";

fn qldrift(args: &[&str], workers: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qldrift")).args(args).env("QLDRIFT_WORKERS", workers.to_string()).output().expect("spawn qldrift")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("cfg.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn run_ok(args: &[&str], workers: usize) {
    let out = qldrift(args, workers);
    assert!(out.status.success(), "qldrift {args:?} failed:\n{}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect()
}

fn data_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv") || n == "verdicts.json")
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), std::fs::read(dir.join(&n)).unwrap())).collect()
}

#[test]
fn empty_config_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "   \n");
    let out = qldrift(&["field", "--config", cfg.to_str().unwrap()], 1);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_key_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "spectrum.modes = 4\n");
    let out = qldrift(&["field", "--config", cfg.to_str().unwrap()], 1);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_static_mode_gives_a_linear_control() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "spectrum.M = 0\nspectrum.N = 1\nspectrum.sigma = \"zero\"\nrun.repetitions = 3\nrun.suites = []\ngrid.steps_per_period = 64\ngrid.record_every = 1\n");
    let out = tmp.path().join("out");
    run_ok(&["field", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], 1);
    for r in 0..3 {
        let data = rows(&out.join(format!("field_{r:05}.csv")));
        assert_eq!(data.len(), 65);
        let last = data.last().unwrap();
        let (slope_re, slope_im) = (last[1] / last[0], last[2] / last[0]);
        assert!(slope_re.hypot(slope_im) > 0.0);
        for row in &data {
            assert!((row[1] - slope_re * row[0]).abs() < 1e-12, "{row:?}");
            assert!((row[2] - slope_im * row[0]).abs() < 1e-12, "{row:?}");
        }
    }
}

#[test]
fn reruns_and_worker_counts_give_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    for cmd in ["field", "particles"] {
        let dirs: Vec<PathBuf> = ["a", "b", "c"].iter().map(|d| tmp.path().join(format!("{cmd}-{d}"))).collect();
        for (dir, workers) in dirs.iter().zip([1, 1, 3]) {
            run_ok(&[cmd, "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()], workers);
        }
        let a = data_files(&dirs[0]);
        assert!(!a.is_empty());
        assert_eq!(a, data_files(&dirs[1]), "{cmd} rerun differs");
        assert_eq!(a, data_files(&dirs[2]), "{cmd} differs across worker counts");
    }
}

#[test]
fn seed_changes_the_output() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_ok(&["field", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap(), "--seed", "5"], 1);
    run_ok(&["field", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap(), "--seed", "6"], 1);
    assert_ne!(data_files(&a), data_files(&b));
}

#[test]
fn free_preset_is_free_flight() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("free");
    run_ok(&["particles", "--preset", "free", "--out", out.to_str().unwrap()], 1);
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert!(manifest["warnings"].as_array().unwrap().is_empty(), "{manifest}");
    let velocity = 0.25 * manifest["config"]["spectrum"]["amp_scale"].as_f64().unwrap();
    let data = rows(&out.join("trajectories.csv"));
    let mut q0 = [f64::NAN; 2];
    for row in &data {
        let (l, t, q, p) = (row[1] as usize, row[2], row[3], row[4]);
        if t == 0.0 {
            q0[l] = q;
        }
        assert_eq!(p, 0.25);
        assert!((q - q0[l] - velocity * t).abs() < 1e-12 * (1.0 + q.abs()), "{row:?}");
    }
}

#[test]
fn single_family_preset_warns_in_the_manifest() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("be");
    let cfg = write_config(tmp.path(), "spectrum.M = 16\ngrid.steps_per_period = 512\n");
    run_ok(&["particles", "--preset", "be", "--config", cfg.to_str().unwrap(), "--reps", "4", "--out", out.to_str().unwrap()], 1);
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    let warnings = manifest["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("N = 1")), "{warnings:?}");
    assert_eq!(manifest["config"]["spectrum"]["N"], 1);
    assert_eq!(manifest["config"]["spectrum"]["M"], 16);
}

#[test]
fn single_value_sweep_matches_a_plain_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let (plain, sweep) = (tmp.path().join("plain"), tmp.path().join("sweep"));
    let alt = tmp.path().join("alt.toml");
    std::fs::write(&alt, SMALL.replace("spectrum.N = 4", "spectrum.N = 2")).unwrap();
    run_ok(&["field", "--config", alt.to_str().unwrap(), "--out", plain.to_str().unwrap()], 1);
    run_ok(&["sweep", "--config", cfg.to_str().unwrap(), "--axis", "N", "--values", "2", "--out", sweep.to_str().unwrap()], 1);
    assert!(sweep.join("sweep_summary.csv").exists());
    let sub = sweep.join("n=2");
    let strip = |v: Vec<(String, Vec<u8>)>| v.into_iter().filter(|(n, _)| n.starts_with("field_")).collect::<Vec<_>>();
    let a = strip(data_files(&plain));
    assert_eq!(a.len(), 6);
    assert_eq!(a, strip(data_files(&sub)));
}

#[test]
fn verify_rejects_unknown_criterion() {
    let tmp = TempDir::new().unwrap();
    let out = qldrift(&["verify", "--only", "9", "--out", tmp.path().to_str().unwrap()], 1);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pair_command_writes_bounded_paths() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("pair");
    let cfg = write_config(tmp.path(), "pair.horizon = 1.0\npair.times = [0.5, 1.0]\n");
    run_ok(&["pair", "--config", cfg.to_str().unwrap(), "--reps", "20", "--out", out.to_str().unwrap()], 1);
    let data = rows(&out.join("pair.csv"));
    assert_eq!(data.len(), 20 * 11);
    for row in &data {
        assert!(row.iter().all(|v| v.is_finite()), "{row:?}");
    }
}

/// A sign error in the force must be caught by the numerical-core checks,
/// even though the Gaussianity checks are blind to it.
#[test]
fn flipped_force_sign_is_detected() {
    let tmp = TempDir::new().unwrap();
    let mut opts = AcceptanceOptions::new(Level::Quick, tmp.path());
    opts.coupling = -std::f64::consts::SQRT_2;
    let (reports, _) = criterion_8(&opts).unwrap();
    let drift = reports.iter().find(|r| r.name.contains("energy drift")).unwrap();
    assert!(!drift.passed, "{drift}");
    let (gauss, _) = criterion_1(&opts).unwrap();
    assert!(gauss.iter().all(|r| r.passed));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            qldrift_cli::ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 4);
}
