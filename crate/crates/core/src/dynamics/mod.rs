//! Particle motion in finite fields and the limit processes it approaches.

mod integrator;
mod pair;
mod separation;
mod wiener;

pub use integrator::{
    integrate, integrate_reverse, integration_warnings, step_cap, wave_frame_energy, IntegrateOptions, Stepper, Trajectories,
    UNIT_RATE_COUPLING,
};
pub use pair::{pair_bound_reports, pair_path, simulate_pair, simulate_pair_with_cap, PairPath, PairState, PAIR_MAX_DT};
pub use separation::{check_separation, SeparationCheck};
pub use wiener::{brownian_increment, sde_path, stratonovich_equivalence_probe, wiener_oracle, SdeScheme, StratonovichProbe, WienerPath};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wavefield::{PathGrid, SpectrumConfig};

/// Position (unwrapped radians) and rescaled momentum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub q: f64,
    pub p: f64,
}

impl ParticleState {
    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }
}

/// Trajectories over many realizations, all on one recording grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    pub grid: PathGrid,
    pub particles: usize,
    pub config: SpectrumConfig,
    /// Field seed of each realization.
    pub seeds: Vec<u64>,
    pub warnings: Vec<String>,
    states: Vec<ParticleState>,
}

impl TrajectoryEnsemble {
    /// Collects per-realization trajectories; all must share grid and particle count.
    pub fn from_realizations(config: SpectrumConfig, seeds: Vec<u64>, runs: Vec<Trajectories>) -> Result<Self> {
        let first = runs.first().ok_or_else(|| Error::Precondition("an ensemble needs at least one realization".into()))?;
        if seeds.len() != runs.len() {
            return Err(Error::Precondition(format!("{} seeds for {} realizations", seeds.len(), runs.len())));
        }
        let (grid, particles) = (first.grid, first.particles);
        let mut warnings = Vec::new();
        let mut states = Vec::with_capacity(runs.len() * particles * grid.len());
        for (r, run) in runs.into_iter().enumerate() {
            if run.grid != grid || run.particles != particles {
                return Err(Error::Precondition(format!("realization {r} has a different grid or particle count")));
            }
            for w in run.warnings {
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
            states.extend(run.states);
        }
        Ok(Self { grid, particles, config, seeds, warnings, states })
    }

    pub fn realizations(&self) -> usize {
        self.seeds.len()
    }

    pub fn state(&self, realization: usize, particle: usize, node: usize) -> ParticleState {
        self.states[(realization * self.particles + particle) * self.grid.len() + node]
    }

    /// `P_l(t_node) - P_l(t_0)` across realizations, one vector per particle.
    pub fn momentum_increments(&self, node: usize) -> Vec<Vec<f64>> {
        (0..self.particles)
            .map(|l| (0..self.realizations()).map(|r| self.state(r, l, node).p - self.state(r, l, 0).p).collect())
            .collect()
    }
}
