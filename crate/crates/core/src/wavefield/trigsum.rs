//! Fast evaluation of mode sums `F(t) = sum_n e^{-i sigma_n t} sum_m c_{m,n} e^{-i m t}`.
//!
//! The inner sum pairs `m` with `-m`:
//! `c_m e^{-imt} + c_{-m} e^{imt} = (c_m + c_{-m}) cos mt - i (c_m - c_{-m}) sin mt`,
//! so each pair costs four real multiply-adds against a shared cos/sin table.
//! The table itself is built per call by complex rotation from one exact
//! `e^{it}`, reseeded from `sin_cos` every [`RESEED`] harmonics; the result is
//! exact for arbitrary `t` and carries no drift in time.

use num_complex::Complex64;

const RESEED: usize = 64;
const LANES: usize = 4;

/// Coefficient table for one sum. Layout per row: `[pr | pi | qr | qi]`,
/// each of length `M`, where `p_k = c_k + c_{-k}` and `q_k = -i (c_k - c_{-k})`.
#[derive(Clone, Debug)]
pub struct TrigSum {
    harmonics: usize,
    sigmas: Vec<f64>,
    centers: Vec<Complex64>,
    coef: Vec<f64>,
}

/// Per-worker cos/sin table.
#[derive(Clone, Debug, Default)]
pub struct TrigScratch {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn fill(&mut self, harmonics: usize, t: f64) {
        self.cos.resize(harmonics, 0.0);
        self.sin.resize(harmonics, 0.0);
        if harmonics == 0 {
            return;
        }
        let (s1, c1) = t.sin_cos();
        let (mut c, mut s) = (c1, s1);
        for k in 0..harmonics {
            let h = k + 1;
            if h % RESEED == 0 {
                let (sk, ck) = (h as f64 * t).sin_cos();
                c = ck;
                s = sk;
            } else if k > 0 {
                let (cp, sp) = (c, s);
                c = cp * c1 - sp * s1;
                s = sp * c1 + cp * s1;
            }
            self.cos[k] = c;
            self.sin[k] = s;
        }
    }
}

impl TrigSum {
    /// Build from a row-major table `c[row * (2M+1) + (m + M)]` and one
    /// frequency shift per row.
    pub fn new(harmonics: usize, sigmas: Vec<f64>, table: &[Complex64]) -> Self {
        let width = 2 * harmonics + 1;
        assert_eq!(table.len(), width * sigmas.len(), "coefficient table shape");
        let mut centers = Vec::with_capacity(sigmas.len());
        let mut coef = vec![0.0; 4 * harmonics * sigmas.len()];
        for (row, chunk) in table.chunks_exact(width).enumerate() {
            centers.push(chunk[harmonics]);
            let base = 4 * harmonics * row;
            let (pr, rest) = coef[base..base + 4 * harmonics].split_at_mut(harmonics);
            let (pi, rest) = rest.split_at_mut(harmonics);
            let (qr, qi) = rest.split_at_mut(harmonics);
            for k in 1..=harmonics {
                let plus = chunk[harmonics + k];
                let minus = chunk[harmonics - k];
                let p = plus + minus;
                let q = Complex64::new(0.0, -1.0) * (plus - minus);
                pr[k - 1] = p.re;
                pi[k - 1] = p.im;
                qr[k - 1] = q.re;
                qi[k - 1] = q.im;
            }
        }
        Self { harmonics, sigmas, centers, coef }
    }

    pub fn harmonics(&self) -> usize {
        self.harmonics
    }

    pub fn rows(&self) -> usize {
        self.sigmas.len()
    }

    pub fn eval(&self, t: f64, scratch: &mut TrigScratch) -> Complex64 {
        let h = self.harmonics;
        scratch.fill(h, t);
        let (cos, sin) = (&scratch.cos[..h], &scratch.sin[..h]);
        let mut total = Complex64::new(0.0, 0.0);
        for (row, (&sigma, &center)) in self.sigmas.iter().zip(&self.centers).enumerate() {
            let base = 4 * h * row;
            let block = &self.coef[base..base + 4 * h];
            let (re, im) = row_dot(&block[..h], &block[h..2 * h], &block[2 * h..3 * h], &block[3 * h..], cos, sin);
            let inner = center + Complex64::new(re, im);
            total += if sigma == 0.0 {
                inner
            } else {
                let (s, c) = (sigma * t).sin_cos();
                inner * Complex64::new(c, -s)
            };
        }
        total
    }
}

#[inline]
fn row_dot(pr: &[f64], pi: &[f64], qr: &[f64], qi: &[f64], cos: &[f64], sin: &[f64]) -> (f64, f64) {
    let n = cos.len();
    let (pr, pi, qr, qi, sin) = (&pr[..n], &pi[..n], &qr[..n], &qi[..n], &sin[..n]);
    let mut acc_re = [0.0f64; LANES];
    let mut acc_im = [0.0f64; LANES];
    let bulk = n - n % LANES;
    let mut k = 0;
    while k < bulk {
        for l in 0..LANES {
            let (c, s) = (cos[k + l], sin[k + l]);
            acc_re[l] += pr[k + l] * c + qr[k + l] * s;
            acc_im[l] += pi[k + l] * c + qi[k + l] * s;
        }
        k += LANES;
    }
    let mut re = (acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]);
    let mut im = (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]);
    for k in bulk..n {
        re += pr[k] * cos[k] + qr[k] * sin[k];
        im += pi[k] * cos[k] + qi[k] * sin[k];
    }
    (re, im)
}
