//! `field`, `particles`, `pair` and `sweep`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use qldrift_core::dynamics::{integrate, pair_bound_reports, simulate_pair_with_cap, IntegrateOptions, PairPath, PairState};
use qldrift_core::seed::derive_seed;
use qldrift_core::stats::{
    complex_gaussianity_suite, dyadic_scales, gaussianity_suite, holder_exponent, independence_suite, ks_distance_normal, mean,
    quadratic_variation, variance, GaussianityOptions, IndependenceOptions, MIN_GAUSSIANITY_SAMPLES, MIN_REPETITIONS,
};
use qldrift_core::wavefield::{Control, ControlPath};
use qldrift_core::{FieldRealization, StatReport, TrajectoryEnsemble};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Suite};
use crate::output::{write_control_csv, write_json, write_pair_csv, write_trajectories_csv, RunManifest};
use crate::pool::with_workers;

/// What a command produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub files: Vec<String>,
    pub verdicts: Vec<StatReport>,
    pub warnings: Vec<String>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|r| r.passed)
    }
}

pub fn repetition_seeds(cfg: &ExperimentConfig) -> Vec<u64> {
    (0..cfg.run.repetitions as u64).map(|r| derive_seed(cfg.run.seed, r)).collect()
}

fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

fn regime_warnings(cfg: &ExperimentConfig) -> Vec<String> {
    let mut w = Vec::new();
    if cfg.spectrum.waves == 1 && !cfg.spectrum.zero_field {
        w.push("N = 1 is outside the limit regime of the convergence theorems (they need N -> infinity)".into());
    }
    w
}

#[allow(clippy::too_many_arguments)]
fn finish(
    command: &str,
    cfg: &ExperimentConfig,
    seeds: Vec<u64>,
    workers: usize,
    started: Instant,
    files: Vec<String>,
    columns: Vec<String>,
    verdicts: Vec<StatReport>,
    warnings: Vec<String>,
) -> Result<RunOutcome> {
    let dir = cfg.run.output_dir.clone();
    write_json(&dir.join("verdicts.json"), &verdicts)?;
    let manifest = RunManifest {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        seeds,
        workers,
        wall_time_s: started.elapsed().as_secs_f64(),
        warnings: warnings.clone(),
        files: files.clone(),
        columns,
        passed: verdicts.iter().all(|r| r.passed),
        verdicts: verdicts.clone(),
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(RunOutcome { dir, files, verdicts, warnings })
}

/// Scales for Hölder fits: dyadic `h` from the first one at least `4 dt` up to 1.
fn holder_scales(dt: f64) -> Vec<f64> {
    let lo = (4.0 * dt).log2().ceil() as i32;
    dyadic_scales(lo.max(-10), 0)
}

/// Samples `U_N^M` per repetition and dumps `(t, re_u, im_u)`.
pub fn cmd_field(cfg: &ExperimentConfig, workers: usize) -> Result<RunOutcome> {
    Ok(field_run(cfg, workers)?.0)
}

fn field_run(cfg: &ExperimentConfig, workers: usize) -> Result<(RunOutcome, Vec<ControlPath>)> {
    let started = Instant::now();
    cfg.validate()?;
    let dir = &cfg.run.output_dir;
    prepare_dir(dir)?;
    let grid = cfg.grid()?;
    let seeds = repetition_seeds(cfg);
    let paths = with_workers(workers, || {
        seeds
            .par_iter()
            .map(|&seed| -> Result<_> {
                let field = FieldRealization::realize(&cfg.spectrum_config(seed)?)?;
                Ok(field.sample_path(Control::Aggregate, &grid))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut files = Vec::with_capacity(paths.len());
    for (r, p) in paths.iter().enumerate() {
        let name = format!("field_{r:05}.csv");
        write_control_csv(&dir.join(&name), p)?;
        files.push(name);
    }

    let horizon = grid.t_end() - grid.t0;
    let reps = paths.len();
    let mut verdicts = Vec::new();
    let mut warnings = regime_warnings(cfg);
    for suite in &cfg.run.suites {
        match suite {
            Suite::Gaussianity if reps >= MIN_GAUSSIANITY_SAMPLES && !cfg.spectrum.zero_field => {
                let ends: Vec<Complex64> = paths.iter().map(|p| *p.values.last().unwrap()).collect();
                verdicts.extend(complex_gaussianity_suite(&ends, &GaussianityOptions::new(0.0, horizon / 2.0))?.into_iter().map(|r| r.prefixed("U(T) ")));
            }
            Suite::QuadraticVariation if !cfg.spectrum.zero_field => {
                let stride = ((0.2 / grid.dt).floor() as usize).max(1);
                let qv = paths
                    .iter()
                    .map(|p| {
                        let re: Vec<f64> = p.values.iter().map(|z| std::f64::consts::SQRT_2 * z.re).collect();
                        quadratic_variation(&re, grid.dt, stride, Some(cfg.spectrum.modes))
                    })
                    .collect::<qldrift_core::Result<Vec<_>>>()?;
                let covered = (grid.n_steps / stride * stride) as f64 * grid.dt;
                verdicts.push(StatReport::within("mean QV of sqrt2 Re U", mean(&qv), covered, 0.15 * covered, reps));
            }
            Suite::Holder if !cfg.spectrum.zero_field => {
                let hs = holder_scales(grid.dt);
                let slopes = paths.iter().map(|p| holder_exponent(&p.values, grid.dt, &hs)).collect::<qldrift_core::Result<Vec<_>>>()?;
                verdicts.push(StatReport::within("mean Holder exponent of U", mean(&slopes), 0.45, 0.10, reps));
            }
            Suite::Independence => {}
            s => warnings.push(format!("suite {s:?} skipped: needs a non-zero field and at least {MIN_GAUSSIANITY_SAMPLES} repetitions")),
        }
    }
    let out = finish("field", cfg, seeds, workers, started, files, vec!["field_*.csv: t, re_u, im_u".into()], verdicts, warnings)?;
    Ok((out, paths))
}

/// Integrates all configured particles in each repetition's field.
pub fn run_particles(cfg: &ExperimentConfig, workers: usize, opts: IntegrateOptions) -> Result<TrajectoryEnsemble> {
    cfg.validate()?;
    let (grid, record_every) = cfg.particle_grid()?;
    let initial = cfg.initial_states();
    let seeds = repetition_seeds(cfg);
    let opts = IntegrateOptions { record_every, separation_c: cfg.particles.separation_c, ..opts };
    let runs = with_workers(workers, || {
        seeds
            .par_iter()
            .map(|&seed| -> Result<_> {
                let field = FieldRealization::realize(&cfg.spectrum_config(seed)?)?;
                Ok(integrate(&field, &initial, &grid, &opts)?)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(TrajectoryEnsemble::from_realizations(cfg.spectrum_config(cfg.run.seed)?, seeds, runs)?)
}

pub fn cmd_particles(cfg: &ExperimentConfig, workers: usize) -> Result<RunOutcome> {
    Ok(particles_run(cfg, workers)?.0)
}

fn particles_run(cfg: &ExperimentConfig, workers: usize) -> Result<(RunOutcome, TrajectoryEnsemble)> {
    let started = Instant::now();
    prepare_dir(&cfg.run.output_dir)?;
    let ens = run_particles(cfg, workers, IntegrateOptions::default())?;
    write_trajectories_csv(&cfg.run.output_dir.join("trajectories.csv"), &ens)?;

    let end = ens.grid.n_steps;
    let horizon = ens.grid.t_end() - ens.grid.t0;
    let reps = ens.realizations();
    let mut warnings = regime_warnings(cfg);
    warnings.extend(ens.warnings.iter().cloned());
    let mut verdicts = Vec::new();
    let free = cfg.spectrum.zero_field;
    for suite in &cfg.run.suites {
        match suite {
            Suite::Gaussianity if reps >= MIN_GAUSSIANITY_SAMPLES && !free => {
                for (l, inc) in ens.momentum_increments(end).iter().enumerate() {
                    let g = gaussianity_suite(inc, &GaussianityOptions::new(0.0, horizon))?;
                    verdicts.extend(g.into_iter().map(|r| r.prefixed(&format!("particle {l} "))));
                }
            }
            Suite::Independence if ens.particles >= 2 && reps >= MIN_REPETITIONS && !free => {
                let mut reports = independence_suite(&ens, ens.grid.t_end(), &IndependenceOptions::default())?;
                reports.retain(|r| r.name.starts_with("|corr"));
                verdicts.extend(reports);
            }
            Suite::QuadraticVariation if !free => {
                let stride = ((0.2 / ens.grid.dt).floor() as usize).max(1);
                let mut qv = Vec::new();
                for r in 0..reps {
                    for l in 0..ens.particles {
                        let p: Vec<f64> = (0..ens.grid.len()).map(|k| ens.state(r, l, k).p).collect();
                        qv.push(quadratic_variation(&p, ens.grid.dt, stride, Some(cfg.spectrum.modes))?);
                    }
                }
                let covered = (ens.grid.n_steps / stride * stride) as f64 * ens.grid.dt;
                verdicts.push(StatReport::within("mean QV of P", mean(&qv), covered, 0.15 * covered, qv.len()));
            }
            Suite::Holder => {}
            s => warnings.push(format!("suite {s:?} skipped for this configuration")),
        }
    }
    let seeds = ens.seeds.clone();
    let out = finish(
        "particles",
        cfg,
        seeds,
        workers,
        started,
        vec!["trajectories.csv".into()],
        vec!["trajectories.csv: realization, particle, t, q, p".into()],
        verdicts,
        warnings,
    )?;
    Ok((out, ens))
}

pub fn run_pairs(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<PairPath>> {
    let p = &cfg.pair;
    let initial = PairState::new(p.x0, p.y0)?;
    let steps = (p.horizon / p.dt).round() as usize;
    let grid = qldrift_core::PathGrid::new(0.0, p.dt, steps)?;
    let stride = p.record_every;
    if steps % stride != 0 {
        bail!("pair.record_every = {stride} does not divide the {steps} steps");
    }
    let seeds: Vec<u64> = (0..p.paths as u64).map(|r| derive_seed(cfg.run.seed, r)).collect();
    with_workers(workers, || {
        seeds
            .par_iter()
            .map(|&seed| -> Result<_> { Ok(simulate_pair_with_cap(initial, &grid, seed, p.dt.max(1e-3))?.coarsen(stride)?) })
            .collect::<Result<Vec<_>>>()
    })?
}

pub fn cmd_pair(cfg: &ExperimentConfig, workers: usize) -> Result<RunOutcome> {
    let started = Instant::now();
    cfg.validate()?;
    prepare_dir(&cfg.run.output_dir)?;
    let paths = run_pairs(cfg, workers)?;
    write_pair_csv(&cfg.run.output_dir.join("pair.csv"), &paths)?;
    let verdicts = pair_bound_reports(&paths, &cfg.pair.times);
    let seeds = (0..cfg.pair.paths as u64).map(|r| derive_seed(cfg.run.seed, r)).collect();
    finish(
        "pair",
        cfg,
        seeds,
        workers,
        started,
        vec!["pair.csv".into()],
        vec!["pair.csv: realization, t, x, y, z".into()],
        verdicts,
        Vec::new(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
pub enum SweepAxis {
    #[value(name = "N")]
    N,
    #[value(name = "M")]
    M,
    #[value(name = "amp_scale")]
    AmpScale,
    #[value(name = "repetitions")]
    Repetitions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
pub enum SweepTarget {
    Field,
    Particles,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub statistic: String,
    pub statistic_value: f64,
    pub passed: bool,
}

fn apply_axis(cfg: &mut ExperimentConfig, axis: SweepAxis, value: f64) -> Result<()> {
    let as_count = || -> Result<usize> {
        if value < 0.0 || value.fract() != 0.0 {
            bail!("{axis:?} needs a non-negative integer, got {value}");
        }
        Ok(value as usize)
    };
    match axis {
        SweepAxis::N => cfg.spectrum.waves = as_count()?,
        SweepAxis::M => cfg.spectrum.modes = as_count()?,
        SweepAxis::AmpScale => cfg.spectrum.amp_scale = value,
        SweepAxis::Repetitions => cfg.run.repetitions = as_count()?,
    }
    cfg.validate()
}

/// One sub-run per value, all from the same master seed.
pub fn cmd_sweep(cfg: &ExperimentConfig, target: SweepTarget, axis: SweepAxis, values: &[f64], workers: usize) -> Result<(RunOutcome, Vec<SweepRow>)> {
    let started = Instant::now();
    if values.is_empty() {
        bail!("sweep needs at least one value");
    }
    prepare_dir(&cfg.run.output_dir)?;
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    let mut files = Vec::new();
    for &value in values {
        let mut sub = cfg.clone();
        apply_axis(&mut sub, axis, value)?;
        let label = format!("{axis:?}={value}").to_lowercase();
        sub.run.output_dir = cfg.run.output_dir.join(&label);
        let (outcome, statistic, stat) = match target {
            SweepTarget::Field => {
                let (out, paths) = field_run(&sub, workers)?;
                let ends: Vec<f64> = paths.iter().map(|p| p.values.last().unwrap().re).collect();
                let d = ks_distance_normal(&ends, 0.0, sub.horizon() / 2.0);
                (out, "KS distance of Re U(T)", d)
            }
            SweepTarget::Particles => {
                let (out, ens) = particles_run(&sub, workers)?;
                let inc = &ens.momentum_increments(ens.grid.n_steps)[0];
                let v = if inc.len() > 1 { variance(inc) / sub.horizon() } else { f64::NAN };
                (out, "Var(P(T) - p0) / T", v)
            }
        };
        files.extend(outcome.files.iter().map(|f| format!("{label}/{f}")));
        rows.push(SweepRow { value, statistic: statistic.into(), statistic_value: stat, passed: outcome.passed() });
        verdicts.extend(outcome.verdicts.into_iter().map(|r| r.prefixed(&format!("{label} "))));
    }
    let summary = cfg.run.output_dir.join("sweep_summary.csv");
    let mut w = csv::Writer::from_path(&summary)?;
    w.write_record(["value", "statistic", "statistic_value", "verdict"])?;
    for r in &rows {
        w.serialize((r.value, &r.statistic, r.statistic_value, if r.passed { "pass" } else { "fail" }))?;
    }
    w.flush()?;
    files.push("sweep_summary.csv".into());
    let outcome = finish(
        "sweep",
        cfg,
        vec![cfg.run.seed],
        workers,
        started,
        files,
        vec!["sweep_summary.csv: value, statistic, statistic_value, verdict".into()],
        verdicts,
        Vec::new(),
    )?;
    Ok((outcome, rows))
}
