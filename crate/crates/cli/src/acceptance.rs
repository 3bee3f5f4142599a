//! The eight acceptance criteria, each producing named verdicts.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use num_complex::Complex64;
use qldrift_core::dynamics::{
    integrate, integrate_reverse, pair_bound_reports, step_cap, wave_frame_energy, wiener_oracle, IntegrateOptions, ParticleState,
    UNIT_RATE_COUPLING,
};
use qldrift_core::oracle::{control_by_quadrature, direct_force};
use qldrift_core::seed::{derive_seed, Stream};
use qldrift_core::stats::{
    complex_mean, dyadic_scales, excess_kurtosis, holder_exponent, independence_suite, ks_distance_normal, ks_two_sample_distance, mean,
    modulus_profile, variance, IndependenceOptions, VarianceTolerance, DEFAULT_KS_SLACK, KS_CRITICAL_5PCT,
};
use qldrift_core::wavefield::{fourier_coefficients, pairing_with, Control};
use qldrift_core::{EnsembleSpec, FieldRealization, PathGrid, SigmaScheme, SpectrumConfig, StatReport, TestFunction, TrajectoryEnsemble};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands::{cmd_field, cmd_pair, cmd_particles, run_pairs};
use crate::config::{ExperimentConfig, Preset};
use crate::output::write_json;
use crate::pool::with_workers;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct AcceptanceOptions {
    pub level: Level,
    pub seed: u64,
    pub workers: usize,
    /// Scratch space for the reproducibility runs.
    pub scratch: PathBuf,
    /// Force gain used by every integration; the energy check always uses
    /// [`UNIT_RATE_COUPLING`], so a wrong gain or sign shows up there.
    pub coupling: f64,
}

impl AcceptanceOptions {
    pub fn new(level: Level, scratch: impl Into<PathBuf>) -> Self {
        Self { level, seed: 20_240_601, workers: crate::pool::default_workers(), scratch: scratch.into(), coupling: UNIT_RATE_COUPLING }
    }

    fn reps(&self, full: usize, quick: usize) -> usize {
        match self.level {
            Level::Full => full,
            Level::Quick => quick,
        }
    }

    fn integrate_options(&self, record_every: usize) -> IntegrateOptions {
        IntegrateOptions { record_every, coupling: self.coupling, ..Default::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub seconds: f64,
    pub reports: Vec<StatReport>,
    pub notes: Vec<String>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {} [{verdict}] {} ({:.1} s)", self.id, self.title, self.seconds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StatReport> {
        self.reports.iter().filter(|r| !r.passed)
    }
}

pub const TITLES: [&str; 8] = [
    "Brownian limit of U",
    "single-particle Wiener limit",
    "independence of particles in one field",
    "pairing moments",
    "modulus of continuity and Holder regularity",
    "pair-process bounds",
    "deterministic reproducibility",
    "numerical-core oracles",
];

/// Wall-time budget per criterion.
pub const RUNTIME_BUDGET_S: [f64; 8] = [60.0, 600.0, 1200.0, 60.0, 120.0, 120.0, f64::INFINITY, f64::INFINITY];

/// Runs one criterion; errors become a failed outcome carrying the message.
pub fn run_criterion(id: u8, opts: &AcceptanceOptions) -> CriterionOutcome {
    let started = Instant::now();
    let result = match id {
        1 => criterion_1(opts),
        2 => criterion_2(opts, &Criterion2::default()),
        3 => criterion_3(opts, &Criterion3::default()),
        4 => criterion_4(opts),
        5 => criterion_5(opts),
        6 => criterion_6(opts),
        7 => criterion_7(opts),
        8 => criterion_8(opts),
        _ => Err(anyhow::anyhow!("no criterion {id}")),
    };
    let (mut reports, notes) = match result {
        Ok(x) => x,
        Err(e) => (vec![StatReport::failed("error", f64::NAN, 0.0, 0, format!("{e:#}"))], Vec::new()),
    };
    let seconds = started.elapsed().as_secs_f64();
    if let Some(&budget) = RUNTIME_BUDGET_S.get(usize::from(id).wrapping_sub(1)) {
        if budget.is_finite() {
            reports.push(StatReport::at_most("runtime (s)", seconds, budget, 1));
        }
    }
    CriterionOutcome {
        id,
        title: TITLES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown").into(),
        passed: !reports.is_empty() && reports.iter().all(|r| r.passed),
        seconds,
        reports,
        notes,
    }
}

pub fn run_all(opts: &AcceptanceOptions) -> Vec<CriterionOutcome> {
    (1..=8).map(|id| run_criterion(id, opts)).collect()
}

/// Writes the consolidated verdict report.
pub fn write_report(path: &Path, opts: &AcceptanceOptions, outcomes: &[CriterionOutcome]) -> Result<()> {
    #[derive(Serialize)]
    struct Report<'a> {
        level: Level,
        seed: u64,
        workers: usize,
        passed: bool,
        failed_criteria: Vec<u8>,
        criteria: &'a [CriterionOutcome],
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let report = Report { level: opts.level, seed: opts.seed, workers: opts.workers, passed: failed.is_empty(), failed_criteria: failed, criteria: outcomes };
    write_json(path, &report)
}

type Verdicts = (Vec<StatReport>, Vec<String>);

fn ks_threshold(n: usize) -> f64 {
    KS_CRITICAL_5PCT * DEFAULT_KS_SLACK / (n as f64).sqrt()
}

fn seeds(master: u64, tag: u64, n: usize) -> Vec<u64> {
    let base = derive_seed(master, tag);
    (0..n as u64).map(|r| derive_seed(base, r)).collect()
}

/// `U(2 pi)` for N = 64, M = 256, ladder shifts, uniform phases.
pub fn criterion_1(opts: &AcceptanceOptions) -> Result<Verdicts> {
    let reps = opts.reps(1000, 400);
    let ends = with_workers(opts.workers, || {
        seeds(opts.seed, 1, reps)
            .par_iter()
            .map(|&s| -> Result<Complex64> {
                let cfg = SpectrumConfig::new(256, 64, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), 1.0, s)?;
                Ok(FieldRealization::realize(&cfg)?.eval_aggregate(TAU))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let re: Vec<f64> = ends.iter().map(|z| z.re).collect();
    let im: Vec<f64> = ends.iter().map(|z| z.im).collect();
    let mut out = Vec::new();
    for (part, xs) in [("re", &re), ("im", &im)] {
        out.push(StatReport::at_most(format!("KS distance of {part} U(2pi) vs N(0, pi)"), ks_distance_normal(xs, 0.0, PI), ks_threshold(reps), reps));
        out.push(StatReport::within(format!("Var {part} U(2pi)"), variance(xs), PI, 0.1 * PI, reps));
    }
    let (mr, mi) = (mean(&re), mean(&im));
    let prods: Vec<f64> = re.iter().zip(&im).map(|(a, b)| (a - mr) * (b - mi)).collect();
    let se = (variance(&prods) / reps as f64).sqrt();
    out.push(StatReport::at_most("|Cov(re U, im U)|", mean(&prods).abs(), 3.0 * se, reps).with_std_error(se));
    let sq: Vec<Complex64> = ends.iter().map(|z| z * z).collect();
    let (m2, se2) = complex_mean(&sq);
    out.push(StatReport::at_most("|E U(2pi)^2|", m2.norm(), 3.0 * se2, reps).with_std_error(se2));
    Ok((out, Vec::new()))
}

/// Parameters of the single-particle experiment.
#[derive(Clone, Debug)]
pub struct Criterion2 {
    pub amp_scale: f64,
    pub modes: usize,
    pub waves: usize,
    pub reps: Option<usize>,
}

impl Default for Criterion2 {
    fn default() -> Self {
        Self { amp_scale: 32.0, modes: 128, waves: 32, reps: None }
    }
}

fn particle_ensemble(
    opts: &AcceptanceOptions,
    tag: u64,
    spectrum: (f64, usize, usize),
    initial: &[ParticleState],
    periods: usize,
    reps: usize,
) -> Result<TrajectoryEnsemble> {
    let (amp, modes, waves) = spectrum;
    // 64 recorded nodes per period, integration steps a multiple of that under the cap
    let per_period = 64 * ((TAU / step_cap(modes)) / 64.0).ceil() as usize;
    let grid = PathGrid::span(TAU * periods as f64, per_period * periods)?;
    let iopts = opts.integrate_options(per_period / 64);
    let seeds = seeds(opts.seed, tag, reps);
    let runs = with_workers(opts.workers, || {
        seeds
            .par_iter()
            .map(|&s| -> Result<_> {
                let cfg = SpectrumConfig::new(modes, waves, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), amp, s)?;
                Ok(integrate(&FieldRealization::realize(&cfg)?, initial, &grid, &iopts)?)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let cfg = SpectrumConfig::new(modes, waves, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), amp, opts.seed)?;
    Ok(TrajectoryEnsemble::from_realizations(cfg, seeds, runs)?)
}

pub fn criterion_2(opts: &AcceptanceOptions, params: &Criterion2) -> Result<Verdicts> {
    let reps = params.reps.unwrap_or_else(|| opts.reps(500, 250));
    let init = [ParticleState::new(0.0, 0.0)];
    let ens = particle_ensemble(opts, 2, (params.amp_scale, params.modes, params.waves), &init, 1, reps)?;
    let mut out = Vec::new();
    for (label, t) in [("pi/2", FRAC_PI_2), ("pi", PI), ("2pi", TAU)] {
        let node = ens.grid.node_at(t).context("time on grid")?;
        let inc = &ens.momentum_increments(node)[0];
        let v = variance(inc);
        out.push(StatReport::within(format!("Var(P - p0) at t = {label}"), v, t, 0.1 * t, reps).with_std_error(t * (2.0 / (reps as f64 - 1.0)).sqrt()));
    }
    let fin = &ens.momentum_increments(ens.grid.n_steps)[0];
    out.push(StatReport::within("excess kurtosis of P(2pi) - p0", excess_kurtosis(fin), 0.0, 0.3, reps));
    // oracle ensemble large enough that its own noise barely widens the critical value
    let oracle_n = 10_000;
    let oracle_grid = PathGrid::span(TAU, 64)?;
    let oracle: Vec<f64> = seeds(opts.seed, 20, oracle_n)
        .iter()
        .map(|&s| {
            let w = wiener_oracle(init[0], &oracle_grid, params.amp_scale, s);
            w.states[64].p - init[0].p
        })
        .collect();
    let threshold = 0.065 * (500.0 / reps as f64).sqrt();
    out.push(StatReport::at_most("two-sample KS of P(2pi) - p0 vs oracle B(2pi)", ks_two_sample_distance(fin, &oracle), threshold, reps));
    let mut notes = ens.warnings.clone();
    notes.truncate(1);
    Ok((out, notes))
}

#[derive(Clone, Debug)]
pub struct Criterion3 {
    pub amp_scale: f64,
    pub modes: usize,
    pub waves: usize,
    pub particles: usize,
    pub reps: Option<usize>,
}

impl Default for Criterion3 {
    fn default() -> Self {
        Self { amp_scale: 32.0, modes: 128, waves: 32, particles: 8, reps: None }
    }
}

pub fn criterion_3(opts: &AcceptanceOptions, params: &Criterion3) -> Result<Verdicts> {
    let reps = params.reps.unwrap_or_else(|| opts.reps(400, 200));
    let n = params.particles;
    let init: Vec<ParticleState> = (0..n).map(|l| ParticleState::new(TAU * l as f64 / n as f64, 0.0)).collect();
    let ens = particle_ensemble(opts, 3, (params.amp_scale, params.modes, params.waves), &init, 2, reps)?;
    let iopts = IndependenceOptions { corr_threshold: Some(0.15), variance_tolerance: VarianceTolerance::StdErrors(3.0), ..Default::default() };
    let reports = independence_suite(&ens, 2.0 * TAU, &iopts)?;
    let mut notes = ens.warnings.clone();
    notes.truncate(1);
    Ok((reports, notes))
}

/// `(g, u_1)` with `g = cos t`, `sigma = 1/4`, M = 256.
pub fn criterion_4(opts: &AcceptanceOptions) -> Result<Verdicts> {
    let draws = opts.reps(2000, 800);
    let g = TestFunction::cosine(1);
    let norm = g.l2_norm_sq();
    let base = SpectrumConfig::new(256, 4, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), 1.0, 0)?;
    let c4 = base.ensemble.c4_bound();
    let coef = fourier_coefficients(&FieldRealization::from_alphas(&base, vec![Complex64::new(0.0, 0.0); base.table_len()])?, 1, &g);
    let zetas = with_workers(opts.workers, || {
        seeds(opts.seed, 4, draws)
            .par_iter()
            .map(|&s| -> Result<Complex64> {
                let cfg = SpectrumConfig { seed: s, ..base.clone() };
                Ok(pairing_with(&FieldRealization::realize(&cfg)?, 1, &coef))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let sq: Vec<f64> = zetas.iter().map(|z| z.norm_sqr()).collect();
    let quart: Vec<f64> = sq.iter().map(|x| x * x).collect();
    let se2 = (variance(&sq) / draws as f64).sqrt();
    let se4 = (variance(&quart) / draws as f64).sqrt();
    let (m1, se1) = complex_mean(&zetas);
    let z2: Vec<Complex64> = zetas.iter().map(|z| z * z).collect();
    let (m2, se_z2) = complex_mean(&z2);
    let out = vec![
        StatReport::within("E|zeta|^2", mean(&sq), norm, 0.05 * norm, draws).with_std_error(se2),
        StatReport::at_most("|E zeta|", m1.norm(), 3.0 * se1, draws).with_std_error(se1),
        StatReport::at_most("|E zeta^2|", m2.norm(), 3.0 * se_z2, draws).with_std_error(se_z2),
        StatReport::at_most("E|zeta|^4", mean(&quart), (2.0 + c4) * norm * norm + 3.0 * se4, draws).with_std_error(se4),
    ];
    Ok((out, vec![format!("sigma = 1/4, C4 = {c4}")]))
}

/// Pathwise modulus inequality between `u_n` and `y_n`, then Hölder slopes of `U`.
pub fn criterion_5(opts: &AcceptanceOptions) -> Result<Verdicts> {
    let paths = opts.reps(100, 40);
    let dt = 2f64.powi(-8);
    let grid = PathGrid::new(0.0, dt, (TAU / dt).floor() as usize)?;
    let hs = dyadic_scales(-6, 0);
    let waves = 64;
    let ratios = with_workers(opts.workers, || {
        seeds(opts.seed, 5, paths)
            .par_iter()
            .enumerate()
            .map(|(r, &s)| -> Result<f64> {
                let cfg = SpectrumConfig::new(256, waves, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), 1.0, s)?;
                let field = FieldRealization::realize(&cfg)?;
                let n = 1 + r % waves;
                let sigma = cfg.sigma(n);
                let wu = modulus_profile(&field.sample_path(Control::Shifted(n), &grid).values, dt, &hs)?;
                let wy = modulus_profile(&field.sample_path(Control::Unshifted(n), &grid).values, dt, &hs)?;
                Ok(hs.iter().zip(wu.iter().zip(&wy)).map(|(h, (u, y))| u / ((1.0 + sigma * h) * y)).fold(0.0, f64::max))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    let mut out = vec![StatReport::at_most("max omega_u / ((1 + sigma h) omega_y)", worst, 1.05, paths)];

    // Hölder slopes on scales well above 1/M, where a band-limited path looks rough.
    let holder_paths = opts.reps(5, 3);
    let fine = 2f64.powi(-12);
    let fine_grid = PathGrid::new(0.0, fine, (TAU / fine).floor() as usize)?;
    let hs = dyadic_scales(-10, -4);
    let slopes = with_workers(opts.workers, || {
        seeds(opts.seed, 50, holder_paths)
            .par_iter()
            .map(|&s| -> Result<f64> {
                let cfg = SpectrumConfig::new(16_384, 1, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), 1.0, s)?;
                let path = FieldRealization::realize(&cfg)?.sample_path(Control::Aggregate, &fine_grid);
                Ok(holder_exponent(&path.values, fine, &hs)?)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let lo = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.push(StatReport::at_least("min Holder exponent of U", lo, 0.35, holder_paths));
    out.push(StatReport::at_most("max Holder exponent of U", hi, 0.55, holder_paths));
    Ok((out, vec!["Holder fit: M = 16384, N = 1, h in [2^-10, 2^-4], dt = 2^-12".into()]))
}

pub fn criterion_6(opts: &AcceptanceOptions) -> Result<Verdicts> {
    let mut cfg = Preset::Pair.config();
    cfg.pair.paths = opts.reps(1000, 300);
    cfg.run.seed = derive_seed(opts.seed, 6);
    let paths = run_pairs(&cfg, opts.workers)?;
    Ok((pair_bound_reports(&paths, &[1.0, 5.0, 10.0]), Vec::new()))
}

fn small_runs(scratch: &Path, seed: u64) -> Vec<(&'static str, ExperimentConfig)> {
    let mut field = Preset::Dense.config();
    field.spectrum.modes = 32;
    field.spectrum.waves = 8;
    field.grid.steps_per_period = 256;
    field.grid.record_every = 1;
    field.run.repetitions = 12;
    field.run.suites.clear();

    let mut particles = Preset::Dense.config();
    particles.spectrum.modes = 16;
    particles.spectrum.waves = 4;
    particles.spectrum.amp_scale = 4.0;
    particles.grid.steps_per_period = 1024;
    particles.grid.record_every = 16;
    particles.particles.count = 3;
    particles.run.repetitions = 12;
    particles.run.suites.clear();

    let mut pair = Preset::Pair.config();
    pair.pair.paths = 24;
    pair.pair.horizon = 1.0;
    pair.pair.times = vec![1.0];

    let mut runs = vec![("field", field), ("particles", particles), ("pair", pair)];
    for (name, cfg) in runs.iter_mut() {
        cfg.run.seed = seed;
        cfg.run.output_dir = scratch.join(name);
    }
    runs
}

fn run_into(kind: &str, cfg: &ExperimentConfig, dir: &Path, workers: usize) -> Result<Vec<(String, Vec<u8>)>> {
    let mut cfg = cfg.clone();
    cfg.run.output_dir = dir.to_path_buf();
    let out = match kind {
        "field" => cmd_field(&cfg, workers)?,
        "particles" => cmd_particles(&cfg, workers)?,
        _ => cmd_pair(&cfg, workers)?,
    };
    let mut files = out.files.clone();
    files.push("verdicts.json".into());
    files.into_iter().map(|f| Ok((f.clone(), std::fs::read(dir.join(&f))?))).collect()
}

/// Same seed, rerun and under 1 vs 8 workers: every data file must match byte for byte.
pub fn criterion_7(opts: &AcceptanceOptions) -> Result<Verdicts> {
    let root = opts.scratch.join("reproducibility");
    let mut out = Vec::new();
    for (kind, cfg) in small_runs(&root, derive_seed(opts.seed, 7)) {
        let a = run_into(kind, &cfg, &root.join(format!("{kind}-w1-a")), 1)?;
        let b = run_into(kind, &cfg, &root.join(format!("{kind}-w1-b")), 1)?;
        let c = run_into(kind, &cfg, &root.join(format!("{kind}-w8")), 8)?;
        let differing = |x: &[(String, Vec<u8>)], y: &[(String, Vec<u8>)]| x.iter().zip(y).filter(|(p, q)| p != q).count() + x.len().abs_diff(y.len());
        out.push(StatReport::at_most(format!("{kind}: files differing on rerun"), differing(&a, &b) as f64, 0.0, a.len()));
        out.push(StatReport::at_most(format!("{kind}: files differing 1 vs 8 workers"), differing(&a, &c) as f64, 0.0, a.len()));
    }
    let _ = std::fs::remove_dir_all(&root);
    Ok((out, Vec::new()))
}

fn random_small_config(rng: &mut Stream, max_modes: usize, max_waves: usize, amp: f64) -> Result<SpectrumConfig> {
    let modes = (rng.uniform() * (max_modes + 1) as f64) as usize;
    let waves = 1 + (rng.uniform() * max_waves as f64) as usize;
    let sigmas = (0..waves).map(|_| rng.uniform()).collect();
    Ok(SpectrumConfig::new(modes.min(max_modes), waves.min(max_waves), SigmaScheme::Custom(sigmas), EnsembleSpec::steinhaus(), amp, rng.uniform().to_bits())?)
}

fn max_state_error(a: &[ParticleState], b: &[ParticleState]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.q - y.q).abs().max((x.p - y.p).abs())).fold(0.0, f64::max)
}

pub fn criterion_8(opts: &AcceptanceOptions) -> Result<Verdicts> {
    let mut rng = Stream::new(derive_seed(opts.seed, 8));
    let configs = opts.reps(100, 30);
    let mut out = Vec::new();

    let mut closed = 0.0f64;
    for _ in 0..configs {
        let cfg = random_small_config(&mut rng, 8, 4, 1.0)?;
        let field = FieldRealization::realize(&cfg)?;
        let t = 4.0 * PI * rng.uniform();
        for n in 1..=cfg.waves {
            closed = closed.max((field.eval_u(n, t) - control_by_quadrature(&field, n, t, true)).norm());
            closed = closed.max((field.eval_y(n, t) - control_by_quadrature(&field, n, t, false)).norm());
        }
    }
    out.push(StatReport::at_most("max |closed form - quadrature|", closed, 1e-10, configs));

    let mut force = 0.0f64;
    for _ in 0..configs {
        let cfg = random_small_config(&mut rng, 32, 8, 1.0)?;
        let field = FieldRealization::realize(&cfg)?;
        let mut fast = field.force_sampler();
        for _ in 0..10 {
            let (q, t) = (TAU * rng.uniform() - PI, 4.0 * PI * rng.uniform());
            let reference = direct_force(&field, q, t);
            let (c, s) = field.force_coefficients(t);
            let (fc, fs) = fast.eval(t);
            force = force.max((q.sin() * c + q.cos() * s - reference).abs());
            force = force.max((q.sin() * fc + q.cos() * fs - reference).abs());
        }
    }
    out.push(StatReport::at_most("max |factored force - direct sum|", force, 1e-12, configs * 10));

    let mut reversal = 0.0f64;
    for _ in 0..5 {
        let cfg = random_small_config(&mut rng, 16, 4, 2.0)?;
        let field = FieldRealization::realize(&cfg)?;
        let steps = (TAU / step_cap(cfg.modes)).ceil() as usize;
        let grid = PathGrid::span(TAU, steps)?;
        let init: Vec<ParticleState> = (0..3).map(|_| ParticleState::new(TAU * rng.uniform(), rng.normal())).collect();
        let fwd = integrate(&field, &init, &grid, &opts.integrate_options(1))?;
        let back = integrate_reverse(&field, &fwd.final_states(), &grid, opts.coupling)?;
        reversal = reversal.max(max_state_error(&init, &back));
    }
    out.push(StatReport::at_most("max reversibility error", reversal, 1e-9, 5));

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..10 {
        let amp = 1.0 + rng.uniform();
        let cfg = random_small_config(&mut rng, 4, 2, amp)?;
        let field = FieldRealization::realize(&cfg)?;
        let horizon = 2.0;
        let coarse = (horizon / step_cap(cfg.modes)).ceil() as usize;
        let init: Vec<ParticleState> = (0..2).map(|_| ParticleState::new(TAU * rng.uniform(), 0.5 * rng.normal())).collect();
        let run = |refine: usize| -> Result<Vec<ParticleState>> {
            let grid = PathGrid::span(horizon, coarse * refine)?;
            let tr = integrate(&field, &init, &grid, &opts.integrate_options(refine))?;
            Ok(tr.states)
        };
        let reference = run(16)?;
        let ratio = max_state_error(&run(1)?, &reference) / max_state_error(&run(2)?, &reference);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    out.push(StatReport::at_least("min convergence ratio (dt vs dt/2)", lo, 3.5, 10));
    out.push(StatReport::at_most("max convergence ratio (dt vs dt/2)", hi, 4.5, 10));

    // Single static wave: the wave-frame energy with the reference gain must be conserved.
    let cfg = SpectrumConfig::new(0, 1, SigmaScheme::AllZero, EnsembleSpec::steinhaus(), 2.0, 0)?;
    let field = FieldRealization::from_alphas(&cfg, vec![Complex64::new(1.0, 0.0)])?;
    let steps = 62_832;
    let grid = PathGrid::span(TAU, steps)?;
    let init = ParticleState::new(1.0, 0.3);
    let tr = integrate(&field, &[init], &grid, &opts.integrate_options(16))?;
    let f0 = field.force_coefficients(0.0);
    let e0 = wave_frame_energy(init, f0, cfg.amp_scale, UNIT_RATE_COUPLING);
    let drift = tr.path(0).iter().map(|s| (wave_frame_energy(*s, f0, cfg.amp_scale, UNIT_RATE_COUPLING) - e0).abs()).fold(0.0, f64::max);
    out.push(StatReport::at_most("single-wave energy drift", drift, 1e-8, tr.grid.len()));
    Ok((out, Vec::new()))
}
