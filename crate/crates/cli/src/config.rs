//! Experiment configuration: TOML with dotted keys (`spectrum.M = 128`),
//! unknown keys rejected, plus the shipped presets.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use qldrift_core::dynamics::{step_cap, ParticleState};
use qldrift_core::{EnsembleSpec, PathGrid, SigmaScheme, SpectrumConfig};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaSetting {
    /// `"zero"` or `"ladder"`.
    Named(String),
    Values(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleName {
    Steinhaus,
    FourPoint,
    ComplexNormal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    #[serde(rename = "M")]
    pub modes: usize,
    #[serde(rename = "N")]
    pub waves: usize,
    pub sigma: SigmaSetting,
    pub ensemble: EnsembleName,
    pub amp_scale: f64,
    pub zero_field: bool,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            modes: 128,
            waves: 32,
            sigma: SigmaSetting::Named("ladder".into()),
            ensemble: EnsembleName::Steinhaus,
            amp_scale: 32.0,
            zero_field: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// Horizon in periods: `T = 2 pi K`.
    #[serde(rename = "K")]
    pub periods: usize,
    pub steps_per_period: usize,
    pub record_every: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { periods: 1, steps_per_period: 4096, record_every: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParticleSection {
    /// Number of particles when `initial` is empty: `q0 = 2 pi l / count`, `p = p0`.
    pub count: usize,
    pub p0: f64,
    /// Explicit `[q0, p0]` pairs.
    pub initial: Vec<[f64; 2]>,
    pub separation_c: f64,
}

impl Default for ParticleSection {
    fn default() -> Self {
        Self { count: 8, p0: 0.0, initial: Vec::new(), separation_c: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Gaussianity,
    Independence,
    QuadraticVariation,
    Holder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub repetitions: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub suites: Vec<Suite>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self { repetitions: 400, seed: 1, output_dir: PathBuf::from("qldrift-out"), suites: vec![Suite::Gaussianity, Suite::Independence] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairSection {
    pub x0: f64,
    pub y0: f64,
    pub dt: f64,
    pub horizon: f64,
    pub paths: usize,
    /// Stride of the dumped nodes; statistics use every step.
    pub record_every: usize,
    pub times: Vec<f64>,
}

impl Default for PairSection {
    fn default() -> Self {
        Self { x0: FRAC_PI_2, y0: 0.0, dt: 1e-3, horizon: 10.0, paths: 1000, record_every: 100, times: vec![1.0, 5.0, 10.0] }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spectrum: SpectrumSection,
    pub grid: GridSection,
    pub particles: ParticleSection,
    pub run: RunSection,
    pub pair: PairSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Theorem regime: A/m = 32, N = 32, M = 128, 8 particles, 400 repetitions.
    Dense,
    /// A single wave family with uniform phases, N = 1.
    Be,
    /// Zero field.
    Free,
    /// The relative-coordinate pair process.
    Pair,
}

impl Preset {
    pub fn config(self) -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        match self {
            Preset::Dense => {}
            Preset::Be => {
                c.spectrum.waves = 1;
                c.spectrum.sigma = SigmaSetting::Named("zero".into());
                c.particles.count = 1;
                c.run.repetitions = 200;
                c.run.suites = vec![Suite::Gaussianity];
            }
            Preset::Free => {
                c.spectrum.zero_field = true;
                c.spectrum.modes = 8;
                c.spectrum.waves = 1;
                c.grid.steps_per_period = 256;
                c.grid.record_every = 16;
                c.particles.count = 2;
                c.particles.p0 = 0.25;
                c.run.repetitions = 1;
                c.run.suites = Vec::new();
            }
            Preset::Pair => {}
        }
        c
    }
}

impl ExperimentConfig {
    /// Parses a config file; an empty file is a usage error.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            bail!("config is empty");
        }
        let cfg: Self = toml::from_str(text).context("invalid config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses `text` as overrides on top of `base`; keys absent from `text`
    /// keep their value in `base`.
    pub fn from_toml_str_over(text: &str, base: &ExperimentConfig) -> Result<Self> {
        if text.trim().is_empty() {
            bail!("config is empty");
        }
        let overlay: toml::Table = toml::from_str(text).context("invalid config")?;
        let mut merged = toml::Table::try_from(base).context("serializing base config")?;
        deep_merge(&mut merged, overlay);
        let cfg: Self = toml::Value::Table(merged).try_into().context("invalid config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.grid.periods >= 1, "grid.K must be at least 1");
        ensure!(self.run.repetitions >= 1, "run.repetitions must be at least 1");
        ensure!(self.grid.steps_per_period >= 1, "grid.steps_per_period must be at least 1");
        ensure!(
            self.grid.record_every >= 1 && (self.grid.periods * self.grid.steps_per_period) % self.grid.record_every == 0,
            "grid.record_every must divide the number of steps"
        );
        ensure!(self.particles.separation_c > 0.0, "particles.separation_c must be positive");
        ensure!(self.pair.dt > 0.0 && self.pair.horizon > 0.0, "pair.dt and pair.horizon must be positive");
        ensure!(self.pair.record_every >= 1, "pair.record_every must be at least 1");
        self.spectrum_config(0)?;
        Ok(())
    }

    pub fn sigma_scheme(&self) -> Result<SigmaScheme> {
        Ok(match &self.spectrum.sigma {
            SigmaSetting::Named(s) if s == "zero" => SigmaScheme::AllZero,
            SigmaSetting::Named(s) if s == "ladder" => SigmaScheme::Ladder,
            SigmaSetting::Named(s) => bail!("unknown sigma scheme {s:?}; use \"zero\", \"ladder\" or a list"),
            SigmaSetting::Values(v) => SigmaScheme::Custom(v.clone()),
        })
    }

    pub fn ensemble(&self) -> EnsembleSpec {
        match self.spectrum.ensemble {
            EnsembleName::Steinhaus => EnsembleSpec::steinhaus(),
            EnsembleName::FourPoint => EnsembleSpec::four_point(0.0).expect("zero offset is valid"),
            EnsembleName::ComplexNormal => EnsembleSpec::complex_normal(),
        }
    }

    /// Spectrum of one repetition, with its own seed.
    pub fn spectrum_config(&self, seed: u64) -> Result<SpectrumConfig> {
        let s = &self.spectrum;
        let mut cfg = SpectrumConfig::new(s.modes, s.waves, self.sigma_scheme()?, self.ensemble(), s.amp_scale, seed)?;
        cfg.zero_field = s.zero_field;
        Ok(cfg)
    }

    pub fn horizon(&self) -> f64 {
        TAU * self.grid.periods as f64
    }

    /// Integration grid on `[0, 2 pi K]`.
    pub fn grid(&self) -> Result<PathGrid> {
        Ok(PathGrid::span(self.horizon(), self.grid.periods * self.grid.steps_per_period)?)
    }

    /// Particle grid: the configured one, refined by a power of two until it
    /// respects the step cap.
    pub fn particle_grid(&self) -> Result<(PathGrid, usize)> {
        let cap = step_cap(self.spectrum.modes);
        let mut refine = 1;
        while self.horizon() / (self.grid.periods * self.grid.steps_per_period * refine) as f64 > cap {
            refine *= 2;
        }
        let grid = PathGrid::span(self.horizon(), self.grid.periods * self.grid.steps_per_period * refine)?;
        Ok((grid, self.grid.record_every * refine))
    }

    pub fn initial_states(&self) -> Vec<ParticleState> {
        if !self.particles.initial.is_empty() {
            return self.particles.initial.iter().map(|&[q, p]| ParticleState::new(q, p)).collect();
        }
        let n = self.particles.count.max(1);
        (0..n).map(|l| ParticleState::new(TAU * l as f64 / n as f64, self.particles.p0)).collect()
    }
}

fn deep_merge(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => deep_merge(b, o),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}
