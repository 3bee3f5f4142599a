//! Path regularity: quadratic variation, modulus of continuity, Hölder slope.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A sample-path value with a distance.
pub trait PathPoint: Copy {
    fn dist(self, other: Self) -> f64;
}

impl PathPoint for f64 {
    fn dist(self, other: Self) -> f64 {
        (self - other).abs()
    }
}

impl PathPoint for Complex64 {
    fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

/// Sum of squared increments over every `stride`-th node.
///
/// With `modes = Some(M)` the coarse spacing `stride * dt` must lie in `[20/M, 0.2]`,
/// the window where a band-limited path already looks rough.
pub fn quadratic_variation(path: &[f64], dt: f64, stride: usize, modes: Option<usize>) -> Result<f64> {
    if stride == 0 || path.len() <= stride {
        return Err(Error::Precondition(format!("stride {stride} does not fit a path of {} nodes", path.len())));
    }
    let delta = stride as f64 * dt;
    if let Some(m) = modes {
        let lo = 20.0 / m.max(1) as f64;
        if delta < lo || delta > 0.2 {
            return Err(Error::Precondition(format!(
                "coarse spacing {delta} outside [{lo}, 0.2] required for M = {m}"
            )));
        }
    }
    Ok(path.iter().step_by(stride).zip(path.iter().skip(stride).step_by(stride)).map(|(a, b)| (b - a).powi(2)).sum())
}

fn lag_for(h: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(h >= 4.0 * dt * (1.0 - 1e-12)) {
        return Err(Error::Precondition(format!("scale h = {h} is below the resolution 4 dt = {}", 4.0 * dt)));
    }
    Ok((h / dt + 1e-9).floor() as usize)
}

/// `max |y(t') - y(t)|` over grid pairs with `|t - t'| <= h`.
pub fn modulus_of_continuity<P: PathPoint>(path: &[P], dt: f64, h: f64) -> Result<f64> {
    Ok(modulus_profile(path, dt, &[h])?[0])
}

/// Moduli at several scales sharing one pass over lags up to the largest scale.
pub fn modulus_profile<P: PathPoint>(path: &[P], dt: f64, hs: &[f64]) -> Result<Vec<f64>> {
    let lags = hs.iter().map(|&h| lag_for(h, dt)).collect::<Result<Vec<_>>>()?;
    let max_lag = lags.iter().copied().max().unwrap_or(0).min(path.len().saturating_sub(1));
    // best[l] = max distance at lag exactly l, then running max over l
    let mut best = vec![0.0f64; max_lag + 1];
    for l in 1..=max_lag {
        let mut d = 0.0f64;
        for (a, b) in path.iter().zip(&path[l..]) {
            d = d.max(a.dist(*b));
        }
        best[l] = d.max(best[l - 1]);
    }
    Ok(lags.iter().map(|&l| best[l.min(max_lag)]).collect())
}

/// `2^lo, 2^(lo+1), ..., 2^hi`.
pub fn dyadic_scales(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Slope of `log omega(h)` against `log h` over the given scales.
pub fn holder_exponent<P: PathPoint>(path: &[P], dt: f64, hs: &[f64]) -> Result<f64> {
    let mut distinct = hs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 4 {
        return Err(Error::Precondition(format!("need at least 4 distinct scales, got {}", distinct.len())));
    }
    let moduli = modulus_profile(path, dt, &distinct)?;
    if moduli.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Precondition("zero modulus of continuity: path is constant at some scale".into()));
    }
    Ok(log_log_slope(&distinct, &moduli))
}
