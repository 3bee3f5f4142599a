use serde::{Deserialize, Serialize};

use super::ParticleState;

/// Pairwise margins `1 - cos(dq) + c dp^2` of a set of initial data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationCheck {
    pub c: f64,
    /// Symmetric, zero on the diagonal.
    pub pairwise_margins: Vec<Vec<f64>>,
    pub valid: bool,
}

impl SeparationCheck {
    /// Smallest off-diagonal margin, `+inf` for fewer than two particles.
    pub fn min_margin(&self) -> f64 {
        let mut m = f64::INFINITY;
        for (i, row) in self.pairwise_margins.iter().enumerate() {
            for &v in &row[i + 1..] {
                m = m.min(v);
            }
        }
        m
    }
}

/// Panics if `c <= 0`.
pub fn check_separation(initials: &[ParticleState], c: f64) -> SeparationCheck {
    assert!(c > 0.0, "separation constant must be positive, got {c}");
    let n = initials.len();
    let mut margins = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (initials[i], initials[j]);
            let m = 1.0 - (a.q - b.q).cos() + c * (a.p - b.p).powi(2);
            margins[i][j] = m;
            margins[j][i] = m;
        }
    }
    let mut check = SeparationCheck { c, pairwise_margins: margins, valid: true };
    check.valid = check.min_margin() > 0.0;
    check
}
