use serde::{Deserialize, Serialize};

use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};

/// Default cap on `(2M + 1) N`, the number of stored mode amplitudes.
pub const DEFAULT_MODE_CAP: usize = 1 << 24;

/// Frequency shifts `sigma_n` in [0, 1], one per wave family `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "values", rename_all = "snake_case")]
pub enum SigmaScheme {
    AllZero,
    /// `sigma_n = n / N`.
    Ladder,
    Custom(Vec<f64>),
}

impl SigmaScheme {
    /// `sigma_n` for `n` in `1..=waves`.
    pub fn sigma(&self, n: usize, waves: usize) -> f64 {
        match self {
            SigmaScheme::AllZero => 0.0,
            SigmaScheme::Ladder => n as f64 / waves as f64,
            SigmaScheme::Custom(v) => v[n - 1],
        }
    }

    pub fn sigmas(&self, waves: usize) -> Vec<f64> {
        (1..=waves).map(|n| self.sigma(n, waves)).collect()
    }
}

/// Full parameterization of a random wave field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    /// `M`: modes run over `m = -M..=M`.
    pub modes: usize,
    /// `N`: wave families per unit frequency.
    pub waves: usize,
    pub sigma: SigmaScheme,
    pub ensemble: EnsembleSpec,
    /// Overall amplitude over mass, `A/m`.
    pub amp_scale: f64,
    pub seed: u64,
    /// Force every amplitude to zero (free-flight control runs).
    #[serde(default)]
    pub zero_field: bool,
}

impl SpectrumConfig {
    pub fn new(modes: usize, waves: usize, sigma: SigmaScheme, ensemble: EnsembleSpec, amp_scale: f64, seed: u64) -> Result<Self> {
        let cfg = Self { modes, waves, sigma, ensemble, amp_scale, seed, zero_field: false };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.waves == 0 {
            return Err(Error::InvalidSpectrum("N must be at least 1".into()));
        }
        if !(self.amp_scale > 0.0) || !self.amp_scale.is_finite() {
            return Err(Error::InvalidSpectrum(format!("amp_scale must be positive and finite, got {}", self.amp_scale)));
        }
        if let SigmaScheme::Custom(v) = &self.sigma {
            if v.len() != self.waves {
                return Err(Error::InvalidSpectrum(format!("custom sigma list has {} entries, N = {}", v.len(), self.waves)));
            }
            if let Some(bad) = v.iter().find(|s| !(0.0..=1.0).contains(*s)) {
                return Err(Error::InvalidSpectrum(format!("sigma = {bad} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// `(2M + 1) N`.
    pub fn table_len(&self) -> usize {
        (2 * self.modes + 1).saturating_mul(self.waves)
    }

    pub fn sigma(&self, n: usize) -> f64 {
        self.sigma.sigma(n, self.waves)
    }
}

/// Uniform time grid `t0 + k dt`, `k = 0..=n_steps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    pub t0: f64,
    pub dt: f64,
    pub n_steps: usize,
}

impl PathGrid {
    pub fn new(t0: f64, dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidGrid(format!("need finite t0 and dt > 0, got t0 = {t0}, dt = {dt}")));
        }
        Ok(Self { t0, dt, n_steps })
    }

    /// Grid on `[0, horizon]` with `n_steps` equal steps.
    pub fn span(horizon: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::InvalidGrid("a spanning grid needs at least one step".into()));
        }
        Self::new(0.0, horizon / n_steps as f64, n_steps)
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n_steps)
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(|k| self.time(k))
    }

    /// Nearest node to `t`, if `t` lies on the grid span.
    pub fn node_at(&self, t: f64) -> Option<usize> {
        let k = ((t - self.t0) / self.dt).round();
        if k < 0.0 || k > self.n_steps as f64 {
            return None;
        }
        Some(k as usize)
    }

    /// Every `stride`-th node of this grid.
    pub fn coarsen(&self, stride: usize) -> Result<Self> {
        if stride == 0 || self.n_steps % stride != 0 {
            return Err(Error::InvalidGrid(format!("stride {stride} does not divide {} steps", self.n_steps)));
        }
        Self::new(self.t0, self.dt * stride as f64, self.n_steps / stride)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_is_exact() {
        let s = SigmaScheme::Ladder.sigmas(8);
        for (i, v) in s.iter().enumerate() {
            assert_eq!(*v, (i + 1) as f64 / 8.0);
        }
        assert_eq!(s[7], 1.0);
    }

    #[test]
    fn config_validation() {
        let e = EnsembleSpec::steinhaus();
        assert!(SpectrumConfig::new(2, 0, SigmaScheme::Ladder, e.clone(), 1.0, 0).is_err());
        assert!(SpectrumConfig::new(2, 1, SigmaScheme::Ladder, e.clone(), 0.0, 0).is_err());
        assert!(SpectrumConfig::new(2, 2, SigmaScheme::Custom(vec![0.1]), e.clone(), 1.0, 0).is_err());
        assert!(SpectrumConfig::new(2, 2, SigmaScheme::Custom(vec![0.1, 1.2]), e.clone(), 1.0, 0).is_err());
        let ok = SpectrumConfig::new(2, 3, SigmaScheme::Custom(vec![0.0, 0.5, 1.0]), e, 1.0, 0).unwrap();
        assert_eq!(ok.table_len(), 15);
    }

    #[test]
    fn grid_basics() {
        let g = PathGrid::span(std::f64::consts::TAU, 64).unwrap();
        assert_eq!(g.len(), 65);
        assert_eq!(g.node_at(std::f64::consts::PI), Some(32));
        assert_eq!(g.coarsen(4).unwrap().n_steps, 16);
        assert!(g.coarsen(3).is_err());
        assert!(PathGrid::new(0.0, -1.0, 3).is_err());
    }
}
