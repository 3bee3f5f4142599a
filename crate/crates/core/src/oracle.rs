//! Slow, independent reference computations used to check the fast paths.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::seed::Stream;
use crate::wavefield::FieldRealization;

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let pair = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).norm())
}

/// Adaptive Gauss–Kronrod integral of a complex function, to absolute tolerance `tol`.
pub fn adaptive_integral<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn rec<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 || (b - a).abs() < 1e-12 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    rec(&f, a, b, tol, 40)
}

/// `u_n(t)` (or `y_n(t)` when `shifted` is false) by quadrature of its
/// defining integral `(2 pi)^{-1/2} int_0^t sum_m alpha e^{-i omega s} ds`.
pub fn control_by_quadrature(field: &FieldRealization, n: usize, t: f64, shifted: bool) -> Complex64 {
    let sigma = if shifted { field.config().sigma(n) } else { 0.0 };
    let modes = field.modes() as i64;
    let row = field.row(n);
    let integrand = |s: f64| -> Complex64 {
        row.iter()
            .enumerate()
            .map(|(j, &a)| a * Complex64::from_polar(1.0, -((j as i64 - modes) as f64 + sigma) * s))
            .sum::<Complex64>()
    };
    // one panel per unit of time keeps each panel's oscillation count bounded
    let panels = (t.abs().ceil() as usize).max(1);
    let h = t / panels as f64;
    let total: Complex64 = (0..panels).map(|k| adaptive_integral(integrand, k as f64 * h, (k + 1) as f64 * h, 1e-14)).sum();
    total / TAU.sqrt()
}

/// `(2 pi N)^{-1/2} sum A_{m,n} sin(q - (m + sigma_n) t + phi_{m,n})`.
pub fn direct_force(field: &FieldRealization, q: f64, t: f64) -> f64 {
    let modes = field.modes() as i64;
    let mut sum = 0.0;
    for n in 1..=field.waves() {
        let sigma = field.config().sigma(n);
        for m in -modes..=modes {
            let c = field.amplitude(m, n);
            sum += c.a * (q - (m as f64 + sigma) * t + c.phi).sin();
        }
    }
    sum / (TAU * field.waves() as f64).sqrt()
}

/// Monte Carlo estimate of `Cov(B(h), int_0^h B ds)` from finely discretized
/// paths (trapezoid rule), with its standard error.
pub fn brute_force_area_covariance(h: f64, fine_steps: usize, n_paths: usize, seed: u64) -> (f64, f64) {
    let mut stream = Stream::new(seed);
    let dt = h / fine_steps as f64;
    let sd = dt.sqrt();
    let mut prods = Vec::with_capacity(n_paths);
    for _ in 0..n_paths {
        let (mut b, mut area) = (0.0f64, 0.0f64);
        for _ in 0..fine_steps {
            let next = b + sd * stream.normal();
            area += 0.5 * (b + next) * dt;
            b = next;
        }
        prods.push(b * area);
    }
    let n = n_paths as f64;
    let mean = prods.iter().sum::<f64>() / n;
    let var = prods.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
