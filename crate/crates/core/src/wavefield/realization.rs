use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectrum::{PathGrid, SpectrumConfig, DEFAULT_MODE_CAP};
use super::trigsum::{TrigScratch, TrigSum};
use crate::ensembles::{mode_slot, ComplexAmplitude};
use crate::error::{Error, Result};
use crate::seed::ModeStream;

/// Frequencies closer to zero than this are integrated with the direct formula
/// instead of the `K - gamma e^{-i omega t}` split, which cancels badly there.
const SMALL_OMEGA: f64 = 1e-2;

/// `(1 - e^{-i omega t}) / (i omega)`, with the removable singularity at
/// `omega = 0` filled in by `t`.
pub fn exp_integral(omega: f64, t: f64) -> Complex64 {
    if omega == 0.0 {
        return Complex64::new(t, 0.0);
    }
    let x = omega * t;
    let half = (0.5 * x).sin();
    Complex64::new(x.sin() / omega, -2.0 * half * half / omega)
}

/// One draw of the full `(2M+1) x N` amplitude table.
#[derive(Clone, Debug)]
pub struct FieldRealization {
    config: SpectrumConfig,
    amplitudes: Vec<ComplexAmplitude>,
    alphas: Vec<Complex64>,
}

/// Which controlling process to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "process", content = "n", rename_all = "snake_case")]
pub enum Control {
    /// `U_N^M = N^{-1/2} sum_n u_n^M`
    Aggregate,
    /// `u_n^M`, frequencies `m + sigma_n`
    Shifted(usize),
    /// `y_n^M`, frequencies `m`
    Unshifted(usize),
}

/// A sampled controlling process.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlPath {
    pub grid: PathGrid,
    pub values: Vec<Complex64>,
}

impl ControlPath {
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.im).collect()
    }
}

impl FieldRealization {
    pub fn realize(config: &SpectrumConfig) -> Result<Self> {
        Self::realize_with_cap(config, DEFAULT_MODE_CAP)
    }

    pub fn realize_with_cap(config: &SpectrumConfig, cap: usize) -> Result<Self> {
        config.validate()?;
        let len = config.table_len();
        if len > cap || config.modes > (i64::MAX / 4) as usize {
            return Err(Error::CapExceeded { requested: len, cap });
        }
        let width = 2 * config.modes + 1;
        let zero = ComplexAmplitude { a: 0.0, phi: 0.0 };
        let mut amplitudes = vec![zero; len];
        if !config.zero_field {
            let modes = config.modes as i64;
            for n in 1..=config.waves {
                let row = &mut amplitudes[(n - 1) * width..n * width];
                let mut stream = ModeStream::new(config.seed, n);
                // Visit modes in stream order: m = 0, -1, 1, -2, 2, ...
                for slot in 0..width as u64 {
                    let m = if slot % 2 == 0 { (slot / 2) as i64 } else { -(slot.div_ceil(2) as i64) };
                    debug_assert_eq!(mode_slot(m), slot);
                    stream.seek(slot);
                    row[(m + modes) as usize] = config.ensemble.draw(&mut stream);
                }
            }
        }
        let alphas = amplitudes.iter().map(|a| a.to_complex()).collect();
        Ok(Self { config: config.clone(), amplitudes, alphas })
    }

    /// A realization with a prescribed amplitude table (row-major in `n`,
    /// then `m = -M..=M`).
    pub fn from_alphas(config: &SpectrumConfig, alphas: Vec<Complex64>) -> Result<Self> {
        config.validate()?;
        if alphas.len() != config.table_len() {
            return Err(Error::InvalidSpectrum(format!(
                "amplitude table has {} entries, expected (2M+1)N = {}",
                alphas.len(),
                config.table_len()
            )));
        }
        let amplitudes = alphas
            .iter()
            .map(|z| ComplexAmplitude { a: z.norm(), phi: crate::ensembles::wrap_phase(z.arg()) })
            .collect();
        Ok(Self { config: config.clone(), amplitudes, alphas })
    }

    pub fn config(&self) -> &SpectrumConfig {
        &self.config
    }

    pub fn modes(&self) -> usize {
        self.config.modes
    }

    pub fn waves(&self) -> usize {
        self.config.waves
    }

    fn index(&self, m: i64, n: usize) -> usize {
        assert!(n >= 1 && n <= self.config.waves, "n = {n} outside [1, {}]", self.config.waves);
        assert!(m.unsigned_abs() <= self.config.modes as u64, "m = {m} outside [-M, M]");
        (n - 1) * (2 * self.config.modes + 1) + (m + self.config.modes as i64) as usize
    }

    pub fn alpha(&self, m: i64, n: usize) -> Complex64 {
        self.alphas[self.index(m, n)]
    }

    pub fn amplitude(&self, m: i64, n: usize) -> ComplexAmplitude {
        self.amplitudes[self.index(m, n)]
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn amplitudes(&self) -> &[ComplexAmplitude] {
        &self.amplitudes
    }

    /// Amplitudes `alpha_{m,n}` for `m = -M..=M`.
    pub fn row(&self, n: usize) -> &[Complex64] {
        let start = self.index(-(self.config.modes as i64), n);
        &self.alphas[start..start + 2 * self.config.modes + 1]
    }

    fn closed_form(&self, n: usize, sigma: f64, t: f64) -> Complex64 {
        let modes = self.config.modes as i64;
        let sum: Complex64 = self
            .row(n)
            .iter()
            .enumerate()
            .map(|(j, &a)| a * exp_integral((j as i64 - modes) as f64 + sigma, t))
            .sum();
        sum / TAU.sqrt()
    }

    /// `u_n^M(t)` in closed form. Panics if `n` is outside `1..=N`.
    pub fn eval_u(&self, n: usize, t: f64) -> Complex64 {
        self.closed_form(n, self.config.sigma(n), t)
    }

    /// `y_n^M(t)`: as [`Self::eval_u`] with `sigma_n = 0`.
    pub fn eval_y(&self, n: usize, t: f64) -> Complex64 {
        self.closed_form(n, 0.0, t)
    }

    /// `U_N^M(t) = N^{-1/2} sum_n u_n^M(t)`.
    pub fn eval_aggregate(&self, t: f64) -> Complex64 {
        let sum: Complex64 = (1..=self.config.waves).map(|n| self.eval_u(n, t)).sum();
        sum / (self.config.waves as f64).sqrt()
    }

    /// `(C, S)` with `C + iS = dU_N^M/dt`, evaluated mode by mode.
    pub fn force_coefficients(&self, t: f64) -> (f64, f64) {
        let modes = self.config.modes as i64;
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 1..=self.config.waves {
            let sigma = self.config.sigma(n);
            for (j, &a) in self.row(n).iter().enumerate() {
                let omega = (j as i64 - modes) as f64 + sigma;
                sum += a * Complex64::from_polar(1.0, -omega * t);
            }
        }
        let z = sum / (TAU * self.config.waves as f64).sqrt();
        (z.re, z.im)
    }

    /// Fast evaluator for `(C, S)`, one per worker.
    pub fn force_sampler(&self) -> ForceSampler {
        let scale = 1.0 / (TAU * self.config.waves as f64).sqrt();
        let table: Vec<Complex64> = self.alphas.iter().map(|a| a * scale).collect();
        ForceSampler { sum: TrigSum::new(self.config.modes, self.config.sigma.sigmas(self.config.waves), &table), scratch: TrigScratch::new() }
    }

    /// Fast evaluator for one controlling process, one per worker.
    pub fn control_sampler(&self, which: Control) -> ControlSampler {
        let modes = self.config.modes;
        let (rows, scale): (Vec<(usize, f64)>, f64) = match which {
            Control::Aggregate => {
                let rows = (1..=self.config.waves).map(|n| (n, self.config.sigma(n))).collect();
                (rows, 1.0 / (TAU * self.config.waves as f64).sqrt())
            }
            Control::Shifted(n) => (vec![(n, self.config.sigma(n))], 1.0 / TAU.sqrt()),
            Control::Unshifted(n) => (vec![(n, 0.0)], 1.0 / TAU.sqrt()),
        };
        let mut constant = Complex64::new(0.0, 0.0);
        let mut linear = Complex64::new(0.0, 0.0);
        let mut slow = Vec::new();
        let mut table = Vec::with_capacity(rows.len() * (2 * modes + 1));
        let mut sigmas = Vec::with_capacity(rows.len());
        for &(n, sigma) in &rows {
            sigmas.push(sigma);
            for (j, &a) in self.row(n).iter().enumerate() {
                let omega = (j as i64 - modes as i64) as f64 + sigma;
                let c = a * scale;
                if omega == 0.0 {
                    linear += c;
                    table.push(Complex64::new(0.0, 0.0));
                } else if omega.abs() < SMALL_OMEGA {
                    slow.push((c, omega));
                    table.push(Complex64::new(0.0, 0.0));
                } else {
                    let gamma = c / Complex64::new(0.0, omega);
                    constant += gamma;
                    table.push(-gamma);
                }
            }
        }
        ControlSampler { sum: TrigSum::new(modes, sigmas, &table), constant, linear, slow, scratch: TrigScratch::new() }
    }

    pub fn sample_path(&self, which: Control, grid: &PathGrid) -> ControlPath {
        let mut sampler = self.control_sampler(which);
        ControlPath { grid: *grid, values: grid.times().map(|t| sampler.eval(t)).collect() }
    }
}

/// `(C(t), S(t))` via [`TrigSum`].
#[derive(Clone, Debug)]
pub struct ForceSampler {
    sum: TrigSum,
    scratch: TrigScratch,
}

impl ForceSampler {
    pub fn eval(&mut self, t: f64) -> (f64, f64) {
        let z = self.sum.eval(t, &mut self.scratch);
        (z.re, z.im)
    }
}

/// Controlling process evaluator: `K + sum(-gamma e^{-i omega t}) + c t + slow modes`.
#[derive(Clone, Debug)]
pub struct ControlSampler {
    sum: TrigSum,
    constant: Complex64,
    linear: Complex64,
    slow: Vec<(Complex64, f64)>,
    scratch: TrigScratch,
}

impl ControlSampler {
    pub fn eval(&mut self, t: f64) -> Complex64 {
        // the split form cancels to roundoff at the origin; the process starts at 0 exactly
        if t == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut z = self.constant + self.sum.eval(t, &mut self.scratch) + self.linear * t;
        for &(c, omega) in &self.slow {
            z += c * exp_integral(omega, t);
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EnsembleSpec;
    use crate::wavefield::SigmaScheme;
    use std::f64::consts::PI;

    fn config(modes: usize, waves: usize, sigma: SigmaScheme) -> SpectrumConfig {
        SpectrumConfig::new(modes, waves, sigma, EnsembleSpec::steinhaus(), 1.0, 99).unwrap()
    }

    fn single_mode(m: i64, modes: usize, sigma: SigmaScheme) -> FieldRealization {
        let cfg = config(modes, 1, sigma);
        let mut alphas = vec![Complex64::new(0.0, 0.0); 2 * modes + 1];
        alphas[(m + modes as i64) as usize] = Complex64::new(1.0, 0.0);
        FieldRealization::from_alphas(&cfg, alphas).unwrap()
    }

    #[test]
    fn table_shape_and_determinism() {
        let f = FieldRealization::realize(&config(0, 1, SigmaScheme::Ladder)).unwrap();
        assert_eq!(f.alphas().len(), 1);
        let cfg = SpectrumConfig::new(2, 3, SigmaScheme::Ladder, EnsembleSpec::four_point(0.0).unwrap(), 1.0, 5).unwrap();
        let a = FieldRealization::realize(&cfg).unwrap();
        let b = FieldRealization::realize(&cfg).unwrap();
        assert_eq!(a.alphas().len(), 15);
        for (x, y) in a.alphas().iter().zip(b.alphas()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert!(a.amplitudes().iter().all(|c| c.a == 1.0));
    }

    #[test]
    fn table_matches_per_key_sampling() {
        let cfg = config(5, 3, SigmaScheme::Ladder);
        let f = FieldRealization::realize(&cfg).unwrap();
        for n in 1..=3 {
            for m in -5i64..=5 {
                let key = crate::ensembles::SeedKey::new(cfg.seed, m, n, 5, 3).unwrap();
                assert_eq!(crate::ensembles::sample_alpha(&cfg.ensemble, key), f.amplitude(m, n));
            }
        }
    }

    #[test]
    fn larger_m_extends_the_same_draw() {
        let small = FieldRealization::realize(&config(3, 2, SigmaScheme::Ladder)).unwrap();
        let large = FieldRealization::realize(&config(9, 2, SigmaScheme::Ladder)).unwrap();
        for n in 1..=2 {
            for m in -3..=3 {
                assert_eq!(small.alpha(m, n), large.alpha(m, n));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = FieldRealization::realize_with_cap(&config(10, 10, SigmaScheme::Ladder), 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { requested: 210, cap: 100 }));
    }

    #[test]
    fn closed_form_examples() {
        let f = FieldRealization::realize(&config(4, 3, SigmaScheme::Ladder)).unwrap();
        assert_eq!(f.eval_u(2, 0.0), Complex64::new(0.0, 0.0));
        assert_eq!(f.eval_y(2, 0.0), Complex64::new(0.0, 0.0));
        assert_eq!(f.eval_aggregate(0.0), Complex64::new(0.0, 0.0));

        let constant = single_mode(0, 0, SigmaScheme::AllZero);
        let u = constant.eval_u(1, 2.5);
        assert!((u - Complex64::new(2.5 / TAU.sqrt(), 0.0)).norm() < 1e-15);

        let one = single_mode(1, 1, SigmaScheme::AllZero);
        let u = one.eval_u(1, PI);
        assert!((u - Complex64::new(0.0, -2.0 / TAU.sqrt())).norm() < 1e-14, "{u}");

        let two = single_mode(2, 2, SigmaScheme::AllZero);
        assert!(two.eval_y(1, PI).norm() < 1e-15);
    }

    #[test]
    fn unshifted_equals_shifted_when_sigma_vanishes() {
        let f = FieldRealization::realize(&config(6, 3, SigmaScheme::AllZero)).unwrap();
        for n in 1..=3 {
            for t in [0.1, 1.0, 7.3] {
                assert_eq!(f.eval_u(n, t), f.eval_y(n, t));
            }
        }
    }

    #[test]
    fn aggregate_with_one_family_is_u1() {
        let f = FieldRealization::realize(&config(5, 1, SigmaScheme::Ladder)).unwrap();
        for t in [0.4, 3.0] {
            assert_eq!(f.eval_aggregate(t), f.eval_u(1, t));
        }
    }

    #[test]
    fn samplers_match_closed_form() {
        let cfg = SpectrumConfig::new(
            7,
            4,
            SigmaScheme::Custom(vec![0.0, 0.004, 0.5, 1.0]),
            EnsembleSpec::complex_normal(),
            1.0,
            3,
        )
        .unwrap();
        let f = FieldRealization::realize(&cfg).unwrap();
        let mut agg = f.control_sampler(Control::Aggregate);
        let mut forces = f.force_sampler();
        for t in [0.0, 0.01, 1.3, 6.0, -2.2, 30.0] {
            assert!((agg.eval(t) - f.eval_aggregate(t)).norm() < 1e-12);
            for n in 1..=4 {
                let mut u = f.control_sampler(Control::Shifted(n));
                let mut y = f.control_sampler(Control::Unshifted(n));
                assert!((u.eval(t) - f.eval_u(n, t)).norm() < 1e-12);
                assert!((y.eval(t) - f.eval_y(n, t)).norm() < 1e-12);
            }
            let (c, s) = forces.eval(t);
            let (c0, s0) = f.force_coefficients(t);
            assert!((c - c0).abs() < 1e-12 && (s - s0).abs() < 1e-12);
        }
    }

    #[test]
    fn force_examples() {
        let f = single_mode(0, 0, SigmaScheme::AllZero);
        for t in [0.0, 1.0, 17.0] {
            let (c, s) = f.force_coefficients(t);
            assert!((c - 1.0 / TAU.sqrt()).abs() < 1e-15 && s.abs() < 1e-15);
        }
        let g = FieldRealization::realize(&config(6, 3, SigmaScheme::AllZero)).unwrap();
        let mut fs = g.force_sampler();
        for t in [0.3, 2.0] {
            let (a, b) = fs.eval(t);
            let (c, d) = fs.eval(t + TAU);
            assert!((a - c).abs() < 1e-12 && (b - d).abs() < 1e-12);
        }
    }

    #[test]
    fn path_starts_at_origin() {
        let f = FieldRealization::realize(&config(8, 2, SigmaScheme::Ladder)).unwrap();
        let p = f.sample_path(Control::Aggregate, &PathGrid::span(TAU, 64).unwrap());
        assert_eq!(p.values.len(), 65);
        assert!(p.values[0].norm() < 1e-14);
    }
}
