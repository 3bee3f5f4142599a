//! Reference quasilinear diffusion coefficient.

use serde::{Deserialize, Serialize};

use crate::wavefield::{diagnostics, SpectrumConfig};

/// Where a velocity sits relative to the resonant band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Interior,
    /// Inside, but within one resonance-box half-width of a boundary.
    NearEdge,
    OutOfRange,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionCoefficient {
    pub value: f64,
    pub coverage: Coverage,
}

/// `D(v)` in rescaled momentum units: `1/2` when the phase velocity `amp_scale * v`
/// is resonant with some wave, `0` otherwise.
#[allow(non_snake_case)]
pub fn quasilinear_D(config: &SpectrumConfig, v: f64) -> DiffusionCoefficient {
    let d = diagnostics(config);
    let (lo, hi) = d.v_range;
    let phase_velocity = config.amp_scale * v;
    if config.zero_field || !(lo..=hi).contains(&phase_velocity) {
        return DiffusionCoefficient { value: 0.0, coverage: Coverage::OutOfRange };
    }
    let edge_distance = (phase_velocity - lo).min(hi - phase_velocity);
    let coverage = if edge_distance < d.dv_box { Coverage::NearEdge } else { Coverage::Interior };
    DiffusionCoefficient { value: 0.5, coverage }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EnsembleSpec;
    use crate::wavefield::SigmaScheme;

    #[test]
    fn inside_outside_and_edge() {
        let cfg = SpectrumConfig::new(128, 32, SigmaScheme::Ladder, EnsembleSpec::steinhaus(), 32.0, 0).unwrap();
        let d0 = quasilinear_D(&cfg, 0.0);
        assert_eq!(d0, DiffusionCoefficient { value: 0.5, coverage: Coverage::Interior });
        assert_eq!(quasilinear_D(&cfg, 1.0), d0);
        let far = quasilinear_D(&cfg, 100.0);
        assert_eq!(far.value, 0.0);
        assert_eq!(far.coverage, Coverage::OutOfRange);
        let edge = quasilinear_D(&cfg, 127.9 / 32.0);
        assert_eq!(edge.coverage, Coverage::NearEdge);
        assert_eq!(edge.value, 0.5);
    }
}
