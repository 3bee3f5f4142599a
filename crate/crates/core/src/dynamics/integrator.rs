//! Kick-drift-kick integration of particles in a shared field realization.

use serde::{Deserialize, Serialize};

use super::separation::check_separation;
use super::ParticleState;
use crate::error::{Error, Result};
use crate::wavefield::{FieldRealization, ForceSampler, PathGrid};

/// Force gain that makes `P(t) - p0` a standard Brownian motion in the limit.
///
/// With `U` normalized so that `Var Re U(t) = t/2`, the bare force
/// `sin q dRe U + cos q dIm U` only yields quadratic variation `t/2`.
pub const UNIT_RATE_COUPLING: f64 = std::f64::consts::SQRT_2;

/// Largest admissible step for a field with modes `|m| <= M`.
pub fn step_cap(modes: usize) -> f64 {
    0.05f64.min(0.2 / (modes as f64 + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    /// Keep every `record_every`-th node.
    pub record_every: usize,
    pub coupling: f64,
    /// Constant in the pairwise separation margin; only gates a warning.
    pub separation_c: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { record_every: 1, coupling: UNIT_RATE_COUPLING, separation_c: 1.0 }
    }
}

/// Trajectories of all particles in one realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectories {
    /// Recording grid.
    pub grid: PathGrid,
    pub particles: usize,
    /// Indexed `[particle * grid.len() + node]`.
    pub states: Vec<ParticleState>,
    pub warnings: Vec<String>,
}

impl Trajectories {
    pub fn state(&self, particle: usize, node: usize) -> ParticleState {
        self.states[particle * self.grid.len() + node]
    }

    pub fn path(&self, particle: usize) -> &[ParticleState] {
        let len = self.grid.len();
        &self.states[particle * len..(particle + 1) * len]
    }

    pub fn final_states(&self) -> Vec<ParticleState> {
        (0..self.particles).map(|l| self.state(l, self.grid.n_steps)).collect()
    }
}

/// One symmetric step per call: half kick, drift, half kick, with the time
/// dependent force frozen at the step midpoint.
#[derive(Clone, Debug)]
pub struct Stepper {
    forces: ForceSampler,
    coupling: f64,
    amp_scale: f64,
}

impl Stepper {
    pub fn new(field: &FieldRealization, coupling: f64) -> Self {
        Self { forces: field.force_sampler(), coupling, amp_scale: field.config().amp_scale }
    }

    /// Advances every state by `dt` (negative to run backwards) using the
    /// force at `t_mid`.
    #[inline]
    pub fn step(&mut self, states: &mut [ParticleState], t_mid: f64, dt: f64) {
        let (c, s) = self.forces.eval(t_mid);
        let (c, s) = (self.coupling * c, self.coupling * s);
        let half = 0.5 * dt;
        let drift = self.amp_scale * dt;
        for st in states.iter_mut() {
            let (sq, cq) = st.q.sin_cos();
            st.p += half * (sq * c + cq * s);
            st.q += drift * st.p;
            let (sq, cq) = st.q.sin_cos();
            st.p += half * (sq * c + cq * s);
        }
    }
}

fn check_step(field: &FieldRealization, grid: &PathGrid) -> Result<()> {
    let cap = step_cap(field.modes());
    if grid.dt > cap * (1.0 + 1e-12) {
        return Err(Error::StepCap { dt: grid.dt, cap, modes: field.modes() });
    }
    Ok(())
}

fn check_finite(states: &[ParticleState], t: f64) -> Result<()> {
    match states.iter().position(|s| !s.q.is_finite() || !s.p.is_finite()) {
        Some(particle) => Err(Error::NonFinite { particle, t }),
        None => Ok(()),
    }
}

/// Warnings for particles that may leave the resonant band, and for initial
/// data violating the separation condition.
pub fn integration_warnings(field: &FieldRealization, initial: &[ParticleState], horizon: f64, separation_c: f64) -> Vec<String> {
    let mut out = Vec::new();
    let a = field.config().amp_scale;
    let limit = 0.8 * field.modes() as f64;
    for (l, s) in initial.iter().enumerate().filter(|_| !field.config().zero_field) {
        let reach = a * (s.p.abs() + 4.0 * horizon.abs().sqrt());
        if reach > limit {
            out.push(format!(
                "particle {l}: amp_scale * (|p0| + 4 sqrt(T)) = {reach:.3} exceeds 0.8 M = {limit:.3}; it may leave the resonant band"
            ));
        }
    }
    if initial.len() > 1 {
        let sep = check_separation(initial, separation_c);
        if !sep.valid {
            out.push(format!("initial data violate the separation condition with c = {separation_c}"));
        }
    }
    out
}

/// Integrates all particles jointly over `grid`.
pub fn integrate(field: &FieldRealization, initial: &[ParticleState], grid: &PathGrid, opts: &IntegrateOptions) -> Result<Trajectories> {
    check_step(field, grid)?;
    let rec = grid.coarsen(opts.record_every)?;
    let len = rec.len();
    let np = initial.len();
    check_finite(initial, grid.t0)?;
    let warnings = integration_warnings(field, initial, grid.t_end() - grid.t0, opts.separation_c);

    let mut states = vec![ParticleState::default(); np * len];
    let mut cur = initial.to_vec();
    let record = |states: &mut Vec<ParticleState>, cur: &[ParticleState], node: usize| {
        for (l, s) in cur.iter().enumerate() {
            states[l * len + node] = *s;
        }
    };
    record(&mut states, &cur, 0);
    let mut stepper = Stepper::new(field, opts.coupling);
    for k in 0..grid.n_steps {
        stepper.step(&mut cur, grid.t0 + (k as f64 + 0.5) * grid.dt, grid.dt);
        if (k + 1) % opts.record_every == 0 {
            check_finite(&cur, grid.time(k + 1))?;
            record(&mut states, &cur, (k + 1) / opts.record_every);
        }
    }
    Ok(Trajectories { grid: rec, particles: np, states, warnings })
}

/// Runs the scheme backwards from states at `grid.t_end()` to `grid.t0`.
pub fn integrate_reverse(field: &FieldRealization, at_end: &[ParticleState], grid: &PathGrid, coupling: f64) -> Result<Vec<ParticleState>> {
    check_step(field, grid)?;
    let mut cur = at_end.to_vec();
    let mut stepper = Stepper::new(field, coupling);
    for k in (0..grid.n_steps).rev() {
        stepper.step(&mut cur, grid.t0 + (k as f64 + 0.5) * grid.dt, -grid.dt);
    }
    check_finite(&cur, grid.t0)?;
    Ok(cur)
}

/// Conserved energy of a static single-wave field in the wave frame:
/// `p^2/2 + (coupling / amp_scale) (C cos q - S sin q)`.
pub fn wave_frame_energy(state: ParticleState, force: (f64, f64), amp_scale: f64, coupling: f64) -> f64 {
    let (c, s) = force;
    0.5 * state.p * state.p + coupling / amp_scale * (c * state.q.cos() - s * state.q.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EnsembleSpec;
    use crate::wavefield::{SigmaScheme, SpectrumConfig};
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    fn field(modes: usize, waves: usize, amp: f64, seed: u64) -> FieldRealization {
        let cfg = SpectrumConfig::new(modes, waves, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), amp, seed).unwrap();
        FieldRealization::realize(&cfg).unwrap()
    }

    #[test]
    fn step_cap_values() {
        assert_eq!(step_cap(0), 0.05);
        assert!((step_cap(128) - 0.2 / 129.0).abs() < 1e-18);
    }

    #[test]
    fn rejects_large_steps_and_bad_stride() {
        let f = field(8, 2, 1.0, 1);
        let grid = PathGrid::new(0.0, 0.1, 10).unwrap();
        let err = integrate(&f, &[ParticleState::new(0.0, 0.0)], &grid, &IntegrateOptions::default()).unwrap_err();
        assert!(matches!(err, Error::StepCap { .. }));
        let grid = PathGrid::new(0.0, 0.01, 10).unwrap();
        let opts = IntegrateOptions { record_every: 3, ..Default::default() };
        assert!(integrate(&f, &[ParticleState::new(0.0, 0.0)], &grid, &opts).is_err());
    }

    #[test]
    fn free_flight() {
        let mut cfg = SpectrumConfig::new(4, 2, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), 3.0, 0).unwrap();
        cfg.zero_field = true;
        let f = FieldRealization::realize(&cfg).unwrap();
        let grid = PathGrid::new(0.0, 0.01, 500).unwrap();
        let tr = integrate(&f, &[ParticleState::new(0.3, -0.7)], &grid, &IntegrateOptions::default()).unwrap();
        for (k, s) in tr.path(0).iter().enumerate() {
            assert_eq!(s.p, -0.7);
            assert!((s.q - (0.3 + 3.0 * -0.7 * grid.time(k))).abs() < 1e-12);
        }
    }

    #[test]
    fn reversible() {
        let f = field(6, 3, 2.0, 4);
        let grid = PathGrid::new(0.0, 0.02, 300).unwrap();
        let init = vec![ParticleState::new(0.1, 0.2), ParticleState::new(2.0, -0.5)];
        let tr = integrate(&f, &init, &grid, &IntegrateOptions::default()).unwrap();
        let back = integrate_reverse(&f, &tr.final_states(), &grid, UNIT_RATE_COUPLING).unwrap();
        for (a, b) in init.iter().zip(&back) {
            assert!((a.q - b.q).abs() < 1e-9 && (a.p - b.p).abs() < 1e-9);
        }
    }

    #[test]
    fn pendulum_energy_is_conserved() {
        let cfg = SpectrumConfig::new(0, 1, SigmaScheme::AllZero, EnsembleSpec::steinhaus(), 2.0, 0).unwrap();
        let f = FieldRealization::from_alphas(&cfg, vec![Complex64::new(1.0, 0.0)]).unwrap();
        let n = 62832;
        let grid = PathGrid::new(0.0, TAU / n as f64, n).unwrap();
        let init = ParticleState::new(1.0, 0.3);
        let tr = integrate(&f, &[init], &grid, &IntegrateOptions { record_every: 8, ..Default::default() }).unwrap();
        let force = f.force_coefficients(0.0);
        let e0 = wave_frame_energy(init, force, 2.0, UNIT_RATE_COUPLING);
        let drift = tr.path(0).iter().map(|s| (wave_frame_energy(*s, force, 2.0, UNIT_RATE_COUPLING) - e0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-8, "{drift}");
    }

    #[test]
    fn resonance_warning() {
        let f = field(8, 2, 32.0, 1);
        let w = integration_warnings(&f, &[ParticleState::new(0.0, 0.0)], TAU, 1.0);
        assert_eq!(w.len(), 1);
        let f = field(512, 2, 1.0, 1);
        assert!(integration_warnings(&f, &[ParticleState::new(0.0, 0.0)], TAU, 1.0).is_empty());
        let same = [ParticleState::new(0.0, 0.0); 2];
        assert_eq!(integration_warnings(&f, &same, TAU, 1.0).len(), 1);
    }
}
