//! CSV data files and JSON manifests.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use qldrift_core::dynamics::PairPath;
use qldrift_core::wavefield::ControlPath;
use qldrift_core::{StatReport, TrajectoryEnsemble};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

/// Columns `t, re_u, im_u`.
pub fn write_control_csv(path: &Path, control: &ControlPath) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["t", "re_u", "im_u"])?;
    for (t, z) in control.grid.times().zip(&control.values) {
        w.serialize((t, z.re, z.im))?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `realization, particle, t, q, p`.
pub fn write_trajectories_csv(path: &Path, ensemble: &TrajectoryEnsemble) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["realization", "particle", "t", "q", "p"])?;
    for r in 0..ensemble.realizations() {
        for l in 0..ensemble.particles {
            for (k, t) in ensemble.grid.times().enumerate() {
                let s = ensemble.state(r, l, k);
                w.serialize((r, l, t, s.q, s.p))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Columns `realization, t, x, y, z`.
pub fn write_pair_csv(path: &Path, paths: &[PairPath]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["realization", "t", "x", "y", "z"])?;
    for (r, p) in paths.iter().enumerate() {
        for (t, s) in p.grid.times().zip(&p.states) {
            w.serialize((r, t, s.x, s.y, s.z))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Everything needed to re-run a command and audit its verdicts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
    pub workers: usize,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
    /// Data files written next to the manifest.
    pub files: Vec<String>,
    /// Column schema per data file kind.
    pub columns: Vec<String>,
    pub passed: bool,
    pub verdicts: Vec<StatReport>,
}
