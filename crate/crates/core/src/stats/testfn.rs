//! Real C1 test functions on [0, 2pi] with Fourier coefficients
//! `g_hat(omega) = (2pi)^{-1/2} int_0^{2pi} g(t) e^{-i omega t} dt`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_16;
use crate::wavefield::exp_integral;

const JOIN_TOL: f64 = 1e-9;

/// Cubic `c0 + c1 s + c2 s^2 + c3 s^3` in the local variable `s = t - start`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicPiece {
    pub start: f64,
    pub end: f64,
    pub coeffs: [f64; 4],
}

impl CubicPiece {
    fn value(&self, s: f64) -> f64 {
        let c = &self.coeffs;
        ((c[3] * s + c[2]) * s + c[1]) * s + c[0]
    }

    fn slope(&self, s: f64) -> f64 {
        let c = &self.coeffs;
        (3.0 * c[3] * s + 2.0 * c[2]) * s + c[1]
    }

    fn square_integral(&self) -> f64 {
        let len = self.end - self.start;
        let mut total = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let p = (i + j + 1) as i32;
                total += self.coeffs[i] * self.coeffs[j] * len.powi(p) / p as f64;
            }
        }
        total
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctionKind {
    /// `constant + sum_k cos[k-1] cos(kt) + sin[k-1] sin(kt)`
    TrigPolynomial { constant: f64, cos: Vec<f64>, sin: Vec<f64> },
    PiecewiseCubic { pieces: Vec<CubicPiece> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    kind: TestFunctionKind,
    l2_norm_sq: f64,
}

impl TestFunction {
    pub fn trig(constant: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if !constant.is_finite() || cos.iter().chain(&sin).any(|c| !c.is_finite()) {
            return Err(Error::Precondition("trigonometric coefficients must be finite".into()));
        }
        let l2 = TAU * constant * constant + PI * cos.iter().chain(&sin).map(|c| c * c).sum::<f64>();
        Self::finish(TestFunctionKind::TrigPolynomial { constant, cos, sin }, l2)
    }

    /// `g(t) = cos(k t)`.
    pub fn cosine(k: usize) -> Self {
        if k == 0 {
            return Self::trig(1.0, vec![], vec![]).expect("constant test function");
        }
        let mut cos = vec![0.0; k];
        cos[k - 1] = 1.0;
        Self::trig(0.0, cos, vec![]).expect("cosine test function")
    }

    /// Cubic Hermite interpolant through `(knots, values, derivatives)`.
    /// Knots must increase from 0 to 2pi.
    pub fn hermite(knots: &[f64], values: &[f64], derivatives: &[f64]) -> Result<Self> {
        if knots.len() < 2 || values.len() != knots.len() || derivatives.len() != knots.len() {
            return Err(Error::Precondition("hermite data needs >= 2 knots and matching values/derivatives".into()));
        }
        let pieces = knots
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let h = w[1] - w[0];
                let (y0, y1, d0, d1) = (values[i], values[i + 1], derivatives[i], derivatives[i + 1]);
                let c2 = (3.0 * (y1 - y0) / h - 2.0 * d0 - d1) / h;
                let c3 = (d0 + d1 - 2.0 * (y1 - y0) / h) / (h * h);
                CubicPiece { start: w[0], end: w[1], coeffs: [y0, d0, c2, c3] }
            })
            .collect();
        Self::piecewise(pieces)
    }

    /// Contiguous cubic pieces covering [0, 2pi]; rejected unless value and
    /// slope agree at every join.
    pub fn piecewise(pieces: Vec<CubicPiece>) -> Result<Self> {
        let first = pieces.first().ok_or_else(|| Error::Precondition("no pieces".into()))?;
        let last = pieces.last().expect("non-empty");
        if first.start.abs() > 1e-12 || (last.end - TAU).abs() > 1e-12 {
            return Err(Error::Precondition("pieces must cover exactly [0, 2pi]".into()));
        }
        for p in &pieces {
            if !(p.end > p.start) || p.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::Precondition("pieces must have positive length and finite coefficients".into()));
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if (a.end - b.start).abs() > 1e-12 {
                return Err(Error::Precondition(format!("gap between pieces {i} and {}", i + 1)));
            }
            let len = a.end - a.start;
            let (va, vb) = (a.value(len), b.value(0.0));
            let (da, db) = (a.slope(len), b.slope(0.0));
            if (va - vb).abs() > JOIN_TOL * (1.0 + va.abs()) {
                return Err(Error::NotC1(format!("value jumps at t = {} ({va} vs {vb})", b.start)));
            }
            if (da - db).abs() > JOIN_TOL * (1.0 + da.abs()) {
                return Err(Error::NotC1(format!("kink at t = {} (slopes {da} vs {db})", b.start)));
            }
        }
        let l2 = pieces.iter().map(CubicPiece::square_integral).sum();
        Self::finish(TestFunctionKind::PiecewiseCubic { pieces }, l2)
    }

    fn finish(kind: TestFunctionKind, l2_norm_sq: f64) -> Result<Self> {
        if !(l2_norm_sq > 0.0) {
            return Err(Error::Precondition("test function must have positive L2 norm".into()));
        }
        Ok(Self { kind, l2_norm_sq })
    }

    pub fn kind(&self) -> &TestFunctionKind {
        &self.kind
    }

    /// `int_0^{2pi} g^2 dt`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.l2_norm_sq
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            TestFunctionKind::TrigPolynomial { constant, cos, sin } => {
                let c: f64 = cos.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * t).cos()).sum();
                let s: f64 = sin.iter().enumerate().map(|(k, b)| b * ((k + 1) as f64 * t).sin()).sum();
                constant + c + s
            }
            TestFunctionKind::PiecewiseCubic { pieces } => {
                let p = pieces.iter().find(|p| t <= p.end).unwrap_or_else(|| pieces.last().expect("non-empty"));
                p.value(t - p.start)
            }
        }
    }

    /// `(2pi)^{-1/2} int_0^{2pi} g(t) e^{-i omega t} dt`: exact for
    /// trigonometric polynomials, 16-point Gauss–Legendre per panel for cubics.
    pub fn fourier_coefficient(&self, omega: f64) -> Complex64 {
        let integral = match &self.kind {
            TestFunctionKind::TrigPolynomial { constant, cos, sin } => {
                let e = |nu: f64| exp_integral(nu, TAU);
                let mut acc = constant * e(omega);
                for (k, &a) in cos.iter().enumerate() {
                    let k = (k + 1) as f64;
                    acc += 0.5 * a * (e(omega - k) + e(omega + k));
                }
                for (k, &b) in sin.iter().enumerate() {
                    let k = (k + 1) as f64;
                    acc += b * (e(omega - k) - e(omega + k)) / Complex64::new(0.0, 2.0);
                }
                acc
            }
            TestFunctionKind::PiecewiseCubic { pieces } => {
                let (nodes, weights) = gauss_legendre_16();
                let mut acc = Complex64::new(0.0, 0.0);
                for p in pieces {
                    let len = p.end - p.start;
                    // Keep each panel under ~2 radians of oscillation.
                    let panels = ((len * omega.abs() / 2.0).ceil() as usize).max(1);
                    let h = len / panels as f64;
                    for j in 0..panels {
                        let a = j as f64 * h;
                        for (x, w) in nodes.iter().zip(weights) {
                            let s = a + 0.5 * h * (x + 1.0);
                            let t = p.start + s;
                            acc += 0.5 * h * w * p.value(s) * Complex64::from_polar(1.0, -omega * t);
                        }
                    }
                }
                acc
            }
        };
        integral / TAU.sqrt()
    }
}
