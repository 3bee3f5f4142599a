use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::spectrum::SpectrumConfig;

/// Spectrum scales derived from a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDiagnostics {
    /// Typical overlap parameter `s`.
    pub s_typ: f64,
    /// Resonance-box half-width, velocity units.
    pub dv_box: f64,
    /// Time after which the discreteness of the spectrum is visible.
    pub tau_disc: f64,
    /// Lowest and highest phase velocity `m + sigma_n`.
    pub v_range: (f64, f64),
    /// Spacing between neighbouring phase velocities.
    pub dv_phi: f64,
    /// r.m.s. single-mode force amplitude `(2 pi N)^{-1/2}`.
    pub e_typ: f64,
}

/// Overlap parameter of two waves with unit wavevector ratio:
/// `2 sqrt|e/m| (sqrt|E1/k1| + sqrt|E2/k2|) / |dv_phi|`.
pub fn overlap_pair(charge_over_mass: f64, e_over_k_1: f64, e_over_k_2: f64, dv_phi: f64) -> f64 {
    2.0 * charge_over_mass.abs().sqrt() * (e_over_k_1.abs().sqrt() + e_over_k_2.abs().sqrt()) / dv_phi.abs()
}

/// Phase-velocity spacing: one over the number of distinct `sigma_n mod 1`.
fn phase_velocity_spacing(config: &SpectrumConfig) -> f64 {
    let mut fractions: Vec<f64> = config.sigma.sigmas(config.waves).iter().map(|s| s.rem_euclid(1.0)).collect();
    fractions.sort_by(f64::total_cmp);
    fractions.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let wrapped = fractions.len() > 1 && (1.0 - fractions[fractions.len() - 1] + fractions[0]) < 1e-12;
    1.0 / (fractions.len() - usize::from(wrapped)) as f64
}

pub fn diagnostics(config: &SpectrumConfig) -> SpectrumDiagnostics {
    let dv_phi = phase_velocity_spacing(config);
    let e_typ = if config.zero_field { 0.0 } else { 1.0 / (TAU * config.waves as f64).sqrt() };
    let s_typ = 4.0 * (config.amp_scale * e_typ).sqrt() / dv_phi;
    // Amplitude per unit phase-velocity spacing, comparable to a spectrum
    // with unit spacing.
    let effective = config.amp_scale * e_typ / dv_phi.sqrt();
    let sigmas = config.sigma.sigmas(config.waves);
    let lo = sigmas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sigmas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let modes = config.modes as f64;
    SpectrumDiagnostics {
        s_typ,
        dv_box: 5.0 * effective.powf(2.0 / 3.0),
        tau_disc: TAU / dv_phi,
        v_range: (-modes + lo, modes + hi),
        dv_phi,
        e_typ,
    }
}
