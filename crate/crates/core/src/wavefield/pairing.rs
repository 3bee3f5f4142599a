use num_complex::Complex64;

use super::realization::FieldRealization;
use crate::stats::TestFunction;

/// `g_hat_{m,n}` for `m = -M..=M`, at frequencies `m + sigma_n`.
pub fn fourier_coefficients(field: &FieldRealization, n: usize, g: &TestFunction) -> Vec<Complex64> {
    let sigma = field.config().sigma(n);
    let modes = field.modes() as i64;
    (-modes..=modes).map(|m| g.fourier_coefficient(m as f64 + sigma)).collect()
}

/// `(g, u_n^M) = int_0^{2pi} g du_n^M = sum_m alpha_{m,n} g_hat_{m,n}`.
pub fn pairing(field: &FieldRealization, n: usize, g: &TestFunction) -> Complex64 {
    pairing_with(field, n, &fourier_coefficients(field, n, g))
}

/// As [`pairing`] with precomputed coefficients (they depend only on `sigma_n`).
pub fn pairing_with(field: &FieldRealization, n: usize, coefficients: &[Complex64]) -> Complex64 {
    field.row(n).iter().zip(coefficients).map(|(a, g)| a * g).sum()
}
