//! Laws for the complex mode amplitudes `alpha = A e^{i phi}`.
//!
//! Every law is symmetric with `E A^2 = 1` and a finite fourth moment; the
//! built-in kinds are also four-symmetric (invariant under `alpha -> i alpha`).
//! Draws are addressed by [`SeedKey`] and are reproducible bit for bit.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::seed::ModeStream;
use crate::stats::StatReport;

const MOMENT_TOL: f64 = 1e-12;

/// Wrap an angle into [0, 2pi).
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Law of the modulus `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum AmplitudeLaw {
    /// `A = 1`.
    Unit,
    /// `A^2` exponential with mean 1.
    Rayleigh,
    /// `A` uniform on `[0, sqrt 3]`.
    Uniform,
    /// Finite law; moments are computed exactly from the atoms.
    Discrete { values: Vec<f64>, weights: Vec<f64> },
}

impl AmplitudeLaw {
    /// `(E A^2, E A^4)`.
    pub fn moments(&self) -> (f64, f64) {
        match self {
            AmplitudeLaw::Unit => (1.0, 1.0),
            AmplitudeLaw::Rayleigh => (1.0, 2.0),
            AmplitudeLaw::Uniform => (1.0, 9.0 / 5.0),
            AmplitudeLaw::Discrete { values, weights } => {
                let total: f64 = weights.iter().sum();
                values.iter().zip(weights).fold((0.0, 0.0), |(m2, m4), (&a, &w)| {
                    let a2 = a * a;
                    (m2 + w / total * a2, m4 + w / total * a2 * a2)
                })
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let AmplitudeLaw::Discrete { values, weights } = self {
            check_atoms(values, weights, "amplitude")?;
            if values.iter().any(|&a| a < 0.0) {
                return Err(Error::InvalidEnsemble("amplitude atoms must be >= 0".into()));
            }
        }
        let (m2, m4) = self.moments();
        if (m2 - 1.0).abs() > MOMENT_TOL {
            return Err(Error::InvalidEnsemble(format!("amplitude law has E A^2 = {m2}, expected 1")));
        }
        if !m4.is_finite() {
            return Err(Error::InvalidEnsemble("amplitude law has no finite fourth moment".into()));
        }
        Ok(())
    }

    fn sample(&self, u: f64) -> f64 {
        match self {
            AmplitudeLaw::Unit => 1.0,
            AmplitudeLaw::Rayleigh => (-(1.0 - u).ln()).sqrt(),
            AmplitudeLaw::Uniform => 3f64.sqrt() * u,
            AmplitudeLaw::Discrete { values, weights } => values[pick_atom(weights, u)],
        }
    }
}

/// Law of the phase `phi`, independent of the modulus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum PhaseLaw {
    Uniform,
    /// `offset + K pi/2` with `K` uniform on `{1, 2, 3, 4}`.
    QuarterTurns { offset: f64 },
    Discrete { values: Vec<f64>, weights: Vec<f64> },
}

impl PhaseLaw {
    fn sample(&self, u: f64) -> f64 {
        match self {
            PhaseLaw::Uniform => TAU * u,
            PhaseLaw::QuarterTurns { offset } => quarter_turn(*offset, u),
            PhaseLaw::Discrete { values, weights } => wrap_phase(values[pick_atom(weights, u)]),
        }
    }

    /// Whether the law is invariant under the rotation `phi -> phi + shift`.
    fn invariant_under(&self, shift: f64) -> bool {
        match self {
            PhaseLaw::Uniform | PhaseLaw::QuarterTurns { .. } => true,
            PhaseLaw::Discrete { values, weights } => {
                let total: f64 = weights.iter().sum();
                let mass_at = |phi: f64| -> f64 {
                    values
                        .iter()
                        .zip(weights)
                        .filter(|(&v, _)| angle_distance(v, phi) < 1e-9)
                        .map(|(_, &w)| w / total)
                        .sum()
                };
                values.iter().all(|&v| (mass_at(v) - mass_at(v + shift)).abs() < 1e-12)
            }
        }
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

fn quarter_turn(offset: f64, u: f64) -> f64 {
    let k = ((4.0 * u) as u32).min(3) + 1;
    wrap_phase(offset + f64::from(k) * FRAC_PI_2)
}

fn check_atoms(values: &[f64], weights: &[f64], what: &str) -> Result<()> {
    if values.is_empty() || values.len() != weights.len() {
        return Err(Error::InvalidEnsemble(format!("{what} atoms and weights must be non-empty and of equal length")));
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) || weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::InvalidEnsemble(format!("{what} weights must be non-negative with positive sum")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidEnsemble(format!("{what} atoms must be finite")));
    }
    Ok(())
}

fn pick_atom(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Family of the amplitude law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnsembleKind {
    /// `e^{i(c + K pi/2)}`, `K` uniform on `{1, 2, 3, 4}`.
    FourPoint { offset: f64 },
    /// Uniform phase, independent modulus.
    Steinhaus { amplitude: AmplitudeLaw },
    /// Isotropic complex normal with `E |alpha|^2 = 1`.
    ComplexNormal,
    CustomPhaseAmplitude { phase: PhaseLaw, amplitude: AmplitudeLaw, is_four_symmetric: bool },
}

/// A validated amplitude law together with its analytic fourth-moment bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleKind", into = "EnsembleKind")]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    c4_bound: f64,
}

impl TryFrom<EnsembleKind> for EnsembleSpec {
    type Error = Error;

    fn try_from(kind: EnsembleKind) -> Result<Self> {
        Self::new(kind)
    }
}

impl From<EnsembleSpec> for EnsembleKind {
    fn from(spec: EnsembleSpec) -> Self {
        spec.kind
    }
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind) -> Result<Self> {
        let c4_bound = match &kind {
            EnsembleKind::FourPoint { offset } => {
                if !offset.is_finite() {
                    return Err(Error::InvalidEnsemble("four-point offset must be finite".into()));
                }
                1.0
            }
            EnsembleKind::Steinhaus { amplitude } => {
                amplitude.validate()?;
                amplitude.moments().1
            }
            EnsembleKind::ComplexNormal => 2.0,
            EnsembleKind::CustomPhaseAmplitude { phase, amplitude, is_four_symmetric } => {
                amplitude.validate()?;
                match phase {
                    PhaseLaw::Discrete { values, weights } => check_atoms(values, weights, "phase")?,
                    PhaseLaw::QuarterTurns { offset } if !offset.is_finite() => {
                        return Err(Error::InvalidEnsemble("phase offset must be finite".into()))
                    }
                    _ => {}
                }
                if !phase.invariant_under(std::f64::consts::PI) {
                    return Err(Error::InvalidEnsemble("phase law is not symmetric (alpha and -alpha differ in law)".into()));
                }
                if *is_four_symmetric && !phase.invariant_under(FRAC_PI_2) {
                    return Err(Error::InvalidEnsemble("phase law declared four-symmetric but is not invariant under pi/2 rotation".into()));
                }
                amplitude.moments().1
            }
        };
        Ok(Self { kind, c4_bound })
    }

    pub fn four_point(offset: f64) -> Result<Self> {
        Self::new(EnsembleKind::FourPoint { offset })
    }

    /// Uniform phases with unit modulus.
    pub fn steinhaus() -> Self {
        Self { kind: EnsembleKind::Steinhaus { amplitude: AmplitudeLaw::Unit }, c4_bound: 1.0 }
    }

    pub fn complex_normal() -> Self {
        Self { kind: EnsembleKind::ComplexNormal, c4_bound: 2.0 }
    }

    pub fn kind(&self) -> &EnsembleKind {
        &self.kind
    }

    /// Analytic `E A^4`.
    pub fn c4_bound(&self) -> f64 {
        self.c4_bound
    }

    pub fn is_four_symmetric(&self) -> bool {
        match &self.kind {
            EnsembleKind::CustomPhaseAmplitude { is_four_symmetric, .. } => *is_four_symmetric,
            _ => true,
        }
    }

    /// Draw from a stream already positioned at the key's window.
    pub(crate) fn draw(&self, stream: &mut ModeStream) -> ComplexAmplitude {
        match &self.kind {
            EnsembleKind::FourPoint { offset } => ComplexAmplitude { a: 1.0, phi: quarter_turn(*offset, stream.uniform()) },
            EnsembleKind::Steinhaus { amplitude } => {
                let phi = wrap_phase(TAU * stream.uniform());
                let a = amplitude.sample(stream.uniform());
                ComplexAmplitude { a, phi }
            }
            EnsembleKind::ComplexNormal => {
                let a = (-(1.0 - stream.uniform()).ln()).sqrt();
                let phi = wrap_phase(TAU * stream.uniform());
                ComplexAmplitude { a, phi }
            }
            EnsembleKind::CustomPhaseAmplitude { phase, amplitude, .. } => {
                let phi = wrap_phase(phase.sample(stream.uniform()));
                let a = amplitude.sample(stream.uniform());
                ComplexAmplitude { a, phi }
            }
        }
    }
}

/// `alpha = a e^{i phi}` with `a >= 0`, `phi` in [0, 2pi).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexAmplitude {
    pub a: f64,
    pub phi: f64,
}

impl ComplexAmplitude {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.a, self.phi)
    }
}

/// Address of one mode draw: `(master_seed, m, n)` with `|m| <= M`, `1 <= n <= N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedKey {
    master_seed: u64,
    m: i64,
    n: usize,
}

impl SeedKey {
    pub fn new(master_seed: u64, m: i64, n: usize, modes: usize, waves: usize) -> Result<Self> {
        if m.unsigned_abs() > modes as u64 {
            return Err(Error::IndexRange(format!("m = {m} outside [-{modes}, {modes}]")));
        }
        if n == 0 || n > waves {
            return Err(Error::IndexRange(format!("n = {n} outside [1, {waves}]")));
        }
        Ok(Self { master_seed, m, n })
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Stream slot of mode `m`; independent of `M`, so enlarging `M` extends a
/// realization instead of redrawing it.
pub(crate) fn mode_slot(m: i64) -> u64 {
    if m >= 0 {
        2 * m as u64
    } else {
        2 * m.unsigned_abs() - 1
    }
}

pub fn sample_alpha(spec: &EnsembleSpec, key: SeedKey) -> ComplexAmplitude {
    let mut stream = ModeStream::new(key.master_seed, key.n);
    stream.seek(mode_slot(key.m));
    spec.draw(&mut stream)
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn complex_mean_and_se(zs: &[Complex64]) -> (Complex64, f64) {
    let n = zs.len() as f64;
    let mean = zs.iter().sum::<Complex64>() / n;
    let var = zs.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn probe_draws(spec: &EnsembleSpec, n_samples: usize, seed: u64) -> Vec<ComplexAmplitude> {
    let mut stream = ModeStream::new(seed, 1);
    (0..n_samples as i64)
        .map(|m| {
            stream.seek(mode_slot(m));
            spec.draw(&mut stream)
        })
        .collect()
}

/// Empirical `E A^2`, `E A^4`, `E alpha` and `E alpha^2` against the
/// model's predictions, each judged at three standard errors.
pub fn moment_probe(spec: &EnsembleSpec, n_samples: usize, seed: u64) -> Result<Vec<StatReport>> {
    if n_samples < 100 {
        return Err(Error::Precondition(format!("moment probe needs at least 100 samples, got {n_samples}")));
    }
    let draws = probe_draws(spec, n_samples, seed);
    let a2: Vec<f64> = draws.iter().map(|d| d.a * d.a).collect();
    let a4: Vec<f64> = a2.iter().map(|x| x * x).collect();
    let alpha: Vec<Complex64> = draws.iter().map(|d| d.to_complex()).collect();
    let alpha2: Vec<Complex64> = alpha.iter().map(|z| z * z).collect();

    let (m2, se2) = mean_and_se(&a2);
    let (m4, se4) = mean_and_se(&a4);
    let (m1c, se1c) = complex_mean_and_se(&alpha);
    let (m2c, se2c) = complex_mean_and_se(&alpha2);

    let mut out = vec![
        StatReport::within("E A^2", m2, 1.0, (3.0 * se2).max(MOMENT_TOL), n_samples).with_std_error(se2),
        StatReport::within("E A^4", m4, spec.c4_bound, (3.0 * se4).max(MOMENT_TOL), n_samples).with_std_error(se4),
        StatReport::at_most("|E alpha|", m1c.norm(), (3.0 * se1c).max(MOMENT_TOL), n_samples).with_std_error(se1c),
    ];
    if spec.is_four_symmetric() {
        out.push(StatReport::at_most("|E alpha^2|", m2c.norm(), (3.0 * se2c).max(MOMENT_TOL), n_samples).with_std_error(se2c));
    }
    Ok(out.into_iter().map(|r| r.with_seed(seed)).collect())
}

/// Chi-square test, at the 1% level, that the phase law is invariant under a
/// quarter turn: the 8-bin phase histogram must look the same in each of the
/// four quadrants.
pub fn phase_quarter_invariance(spec: &EnsembleSpec, n_samples: usize, seed: u64) -> Result<StatReport> {
    if n_samples < 100 {
        return Err(Error::Precondition(format!("quarter-invariance test needs at least 100 samples, got {n_samples}")));
    }
    let draws = probe_draws(spec, n_samples, seed);
    let mut counts = [0.0f64; 8];
    for d in &draws {
        // Nudge so atoms sitting on a bin edge are binned consistently.
        let bin = ((d.phi / FRAC_PI_4 + 1e-9).floor() as usize) % 8;
        counts[bin] += 1.0;
    }
    let mut chi2 = 0.0;
    let mut dof = 0usize;
    for r in 0..2 {
        let class: Vec<f64> = (0..4).map(|q| counts[r + 2 * q]).collect();
        let expected = class.iter().sum::<f64>() / 4.0;
        if expected > 0.0 {
            chi2 += class.iter().map(|c| (c - expected).powi(2) / expected).sum::<f64>();
            dof += 3;
        }
    }
    let critical = ChiSquared::new(dof as f64).map_err(|e| Error::Precondition(e.to_string()))?.inverse_cdf(0.99);
    Ok(StatReport::at_most("phase quarter-turn chi2", chi2, critical, n_samples).with_seed(seed))
}

/// Chi-square test at 1% that the phase is uniform on [0, 2pi) over `bins` bins.
pub fn phase_uniformity(spec: &EnsembleSpec, n_samples: usize, bins: usize, seed: u64) -> Result<StatReport> {
    if n_samples < 5 * bins || bins < 2 {
        return Err(Error::Precondition("phase uniformity needs at least 2 bins and 5 samples per bin".into()));
    }
    let draws = probe_draws(spec, n_samples, seed);
    let mut counts = vec![0.0f64; bins];
    for d in &draws {
        let b = ((d.phi / TAU * bins as f64) as usize).min(bins - 1);
        counts[b] += 1.0;
    }
    let expected = n_samples as f64 / bins as f64;
    let chi2 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum::<f64>();
    let critical = ChiSquared::new((bins - 1) as f64).map_err(|e| Error::Precondition(e.to_string()))?.inverse_cdf(0.99);
    Ok(StatReport::at_most("phase uniformity chi2", chi2, critical, n_samples).with_seed(seed))
}
