//! Relative-coordinate process `dX = Y dt`, `dY = sin X dB` on the cylinder.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Stream;
use crate::stats::{mean, variance, StatReport};
use crate::wavefield::PathGrid;

/// Default largest step for [`simulate_pair`].
pub const PAIR_MAX_DT: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairState {
    /// In `[0, 2 pi)`.
    pub x: f64,
    pub y: f64,
    /// `log(sin^2 x + y^2)`.
    pub z: f64,
}

impl PairState {
    /// Rejects the two points where `sin^2 x + y^2 = 0`.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || (y == 0.0 && x.sin().abs() < 1e-12) {
            return Err(Error::ExcludedPoint { x, y });
        }
        Ok(Self::unchecked(x, y))
    }

    fn unchecked(x: f64, y: f64) -> Self {
        let x = x.rem_euclid(TAU);
        let s = x.sin();
        Self { x, y, z: (s * s + y * y).ln() }
    }

    /// `R = sin^2 x + y^2`.
    pub fn radius_sq(&self) -> f64 {
        let s = self.x.sin();
        s * s + self.y * self.y
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairPath {
    pub grid: PathGrid,
    pub states: Vec<PairState>,
    /// Extremes of `R` over every simulated step, kept through [`PairPath::coarsen`].
    pub r_min: f64,
    pub r_max: f64,
}

impl PairPath {
    fn from_states(grid: PathGrid, states: Vec<PairState>) -> Self {
        let (mut r_min, mut r_max) = (f64::INFINITY, 0.0f64);
        for s in &states {
            let r = s.radius_sq();
            if r.is_nan() {
                (r_min, r_max) = (f64::NAN, f64::NAN);
                break;
            }
            r_min = r_min.min(r);
            r_max = r_max.max(r);
        }
        Self { grid, states, r_min, r_max }
    }

    pub fn z(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.z).collect()
    }

    /// Every `stride`-th node; the recorded `R` extremes are unchanged.
    pub fn coarsen(&self, stride: usize) -> Result<Self> {
        let grid = self.grid.coarsen(stride)?;
        let states = self.states.iter().step_by(stride).copied().collect();
        Ok(Self { grid, states, r_min: self.r_min, r_max: self.r_max })
    }
}

/// Euler–Maruyama driven by explicit Brownian increments, one per step.
pub fn pair_path(initial: PairState, grid: &PathGrid, increments: &[f64]) -> PairPath {
    assert_eq!(increments.len(), grid.n_steps, "one increment per step");
    let mut states = Vec::with_capacity(grid.len());
    let (mut x, mut y) = (initial.x, initial.y);
    states.push(initial);
    for &db in increments {
        let s = x.sin();
        x += y * grid.dt;
        y += s * db;
        states.push(PairState::unchecked(x, y));
        x = states.last().unwrap().x;
    }
    PairPath::from_states(*grid, states)
}

pub fn simulate_pair(initial: PairState, grid: &PathGrid, seed: u64) -> Result<PairPath> {
    simulate_pair_with_cap(initial, grid, seed, PAIR_MAX_DT)
}

pub fn simulate_pair_with_cap(initial: PairState, grid: &PathGrid, seed: u64, max_dt: f64) -> Result<PairPath> {
    PairState::new(initial.x, initial.y)?;
    if grid.dt > max_dt * (1.0 + 1e-12) {
        return Err(Error::InvalidGrid(format!("pair process needs dt <= {max_dt}, got {}", grid.dt)));
    }
    let mut stream = Stream::new(seed);
    let sd = grid.dt.sqrt();
    let incs: Vec<f64> = (0..grid.n_steps).map(|_| sd * stream.normal()).collect();
    Ok(pair_path(initial, grid, &incs))
}

/// No collapse (`R > 0`), no blow-up (finite), and the mean of `Z_t` inside
/// `[Z0 - 3t/2 - 3 SE, Z0 + 2t + 3 SE]` at each requested time.
pub fn pair_bound_reports(paths: &[PairPath], times: &[f64]) -> Vec<StatReport> {
    let n = paths.len();
    let mut min_r = f64::INFINITY;
    let mut max_r = 0.0f64;
    for p in paths {
        if p.r_min.is_nan() || p.r_max.is_nan() {
            (min_r, max_r) = (f64::NAN, f64::NAN);
            break;
        }
        min_r = min_r.min(p.r_min);
        max_r = max_r.max(p.r_max);
    }
    let mut out = vec![
        StatReport::at_least("min R", min_r, f64::MIN_POSITIVE, n),
        StatReport::at_most("max R", max_r, f64::MAX, n),
    ];
    let Some(first) = paths.first() else { return out };
    let z0 = mean(&paths.iter().map(|p| p.states[0].z).collect::<Vec<_>>());
    for &t in times {
        let Some(node) = first.grid.node_at(t) else {
            out.push(StatReport::failed(format!("mean Z({t})"), f64::NAN, 0.0, n, "time outside the grid"));
            continue;
        };
        let elapsed = first.grid.time(node) - first.grid.t0;
        let zs: Vec<f64> = paths.iter().map(|p| p.states[node].z).collect();
        let se = (variance(&zs) / n as f64).sqrt();
        let lo = z0 - 1.5 * elapsed - 3.0 * se;
        let hi = z0 + 2.0 * elapsed + 3.0 * se;
        out.push(
            StatReport::within(format!("mean Z({t})"), mean(&zs), 0.5 * (lo + hi), 0.5 * (hi - lo), n)
                .with_std_error(se)
                .with_note(format!("bounds [{lo:.4}, {hi:.4}]")),
        );
    }
    out
}
