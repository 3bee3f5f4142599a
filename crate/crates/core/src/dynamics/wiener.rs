//! Limit dynamics: exact Wiener sampling and Itô/Stratonovich schemes.

use serde::{Deserialize, Serialize};

use super::ParticleState;
use crate::error::Result;
use crate::seed::Stream;
use crate::stats::{ks_two_sample, variance, StatReport, DEFAULT_KS_SLACK};
use crate::wavefield::PathGrid;

/// Exact draw of `(B(h), int_0^h B ds)` for a Brownian motion started at 0.
pub fn brownian_increment(h: f64, stream: &mut Stream) -> (f64, f64) {
    let (z1, z2) = stream.normal_pair();
    let db = h.sqrt() * z1;
    (db, 0.5 * h * db + (h * h * h / 12.0).sqrt() * z2)
}

/// A sampled limit trajectory `P = p0 + B`, `Q = q0 + a (p0 t + int B)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WienerPath {
    pub grid: PathGrid,
    pub states: Vec<ParticleState>,
}

impl WienerPath {
    pub fn momentum_increments(&self) -> Vec<f64> {
        let p0 = self.states[0].p;
        self.states.iter().map(|s| s.p - p0).collect()
    }
}

pub fn wiener_oracle(initial: ParticleState, grid: &PathGrid, amp_scale: f64, seed: u64) -> WienerPath {
    let mut stream = Stream::new(seed);
    let h = grid.dt;
    let mut states = Vec::with_capacity(grid.len());
    let (mut b, mut area) = (0.0f64, 0.0f64);
    states.push(initial);
    for k in 1..grid.len() {
        let (db, di) = brownian_increment(h, &mut stream);
        area += b * h + di;
        b += db;
        let t = grid.time(k) - grid.t0;
        states.push(ParticleState::new(initial.q + amp_scale * (initial.p * t + area), initial.p + b));
    }
    WienerPath { grid: *grid, states }
}

/// Discretization of `dq = a p dt`, `dp = sin q dB1 + cos q dB2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdeScheme {
    /// Euler–Maruyama, the Itô solution.
    Ito,
    /// Heun predictor-corrector, the Stratonovich solution.
    Stratonovich,
}

/// One path driven by explicit increments `(dB1, dB2)`, one pair per step.
pub fn sde_path(scheme: SdeScheme, initial: ParticleState, grid: &PathGrid, amp_scale: f64, increments: &[(f64, f64)]) -> Vec<ParticleState> {
    assert_eq!(increments.len(), grid.n_steps, "one increment pair per step");
    let h = grid.dt;
    let mut out = Vec::with_capacity(grid.len());
    let mut s = initial;
    out.push(s);
    for &(d1, d2) in increments {
        let (sq, cq) = s.q.sin_cos();
        s = match scheme {
            SdeScheme::Ito => ParticleState::new(s.q + amp_scale * s.p * h, s.p + sq * d1 + cq * d2),
            SdeScheme::Stratonovich => {
                let qp = s.q + amp_scale * s.p * h;
                let pp = s.p + sq * d1 + cq * d2;
                let (sp, cp) = qp.sin_cos();
                ParticleState::new(s.q + 0.5 * amp_scale * (s.p + pp) * h, s.p + 0.5 * ((sq + sp) * d1 + (cq + cp) * d2))
            }
        };
        out.push(s);
    }
    out
}

/// Terminal momentum increments under both schemes, driven path by path by
/// the same noise, and the verdicts comparing them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratonovichProbe {
    pub ito: Vec<f64>,
    pub stratonovich: Vec<f64>,
    pub reports: Vec<StatReport>,
}

/// Two-sample KS between the schemes' `P(T) - p0`, plus each variance vs `T` (±10%).
pub fn stratonovich_equivalence_probe(
    initial: ParticleState,
    grid: &PathGrid,
    amp_scale: f64,
    n_paths: usize,
    seed: u64,
) -> Result<StratonovichProbe> {
    let horizon = grid.t_end() - grid.t0;
    let sd = grid.dt.sqrt();
    let mut ito = Vec::with_capacity(n_paths);
    let mut strat = Vec::with_capacity(n_paths);
    let mut incs = vec![(0.0, 0.0); grid.n_steps];
    for path in 0..n_paths {
        let mut stream = Stream::new(crate::seed::derive_seed(seed, path as u64));
        for inc in incs.iter_mut() {
            let (a, b) = stream.normal_pair();
            *inc = (sd * a, sd * b);
        }
        ito.push(sde_path(SdeScheme::Ito, initial, grid, amp_scale, &incs).last().unwrap().p - initial.p);
        strat.push(sde_path(SdeScheme::Stratonovich, initial, grid, amp_scale, &incs).last().unwrap().p - initial.p);
    }
    let mut reports = vec![ks_two_sample(&ito, &strat, DEFAULT_KS_SLACK)?.with_seed(seed)];
    reports.push(StatReport::within("ito variance", variance(&ito), horizon, 0.1 * horizon, n_paths));
    reports.push(StatReport::within("stratonovich variance", variance(&strat), horizon, 0.1 * horizon, n_paths));
    Ok(StratonovichProbe { ito, stratonovich: strat, reports })
}
