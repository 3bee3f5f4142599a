use serde::{Deserialize, Serialize};

/// How a [`StatReport`] value is judged against its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Comparison {
    /// `value <= threshold`
    AtMost,
    /// `value >= threshold`
    AtLeast,
    /// `|value - target| <= threshold`
    Within { target: f64 },
}

impl Comparison {
    pub fn holds(&self, value: f64, threshold: f64) -> bool {
        if !value.is_finite() || threshold.is_nan() {
            return false;
        }
        match *self {
            Comparison::AtMost => value <= threshold,
            Comparison::AtLeast => value >= threshold,
            Comparison::Within { target } => (value - target).abs() <= threshold,
        }
    }
}

/// One named statistic and its verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub name: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
    pub n_samples: usize,
    pub seed: Option<u64>,
    pub comparison: Comparison,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl StatReport {
    pub fn new(name: impl Into<String>, value: f64, comparison: Comparison, threshold: f64, n_samples: usize) -> Self {
        Self {
            name: name.into(),
            value,
            std_error: None,
            threshold,
            passed: comparison.holds(value, threshold),
            n_samples,
            seed: None,
            comparison,
            note: None,
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64, n_samples: usize) -> Self {
        Self::new(name, value, Comparison::AtMost, threshold, n_samples)
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64, n_samples: usize) -> Self {
        Self::new(name, value, Comparison::AtLeast, threshold, n_samples)
    }

    pub fn within(name: impl Into<String>, value: f64, target: f64, tolerance: f64, n_samples: usize) -> Self {
        Self::new(name, value, Comparison::Within { target }, tolerance, n_samples)
    }

    /// A report that fails regardless of the value, e.g. for degenerate input.
    pub fn failed(name: impl Into<String>, value: f64, threshold: f64, n_samples: usize, note: impl Into<String>) -> Self {
        let mut r = Self::at_most(name, value, threshold, n_samples);
        r.passed = false;
        r.note = Some(note.into());
        r
    }

    pub fn with_std_error(mut self, se: f64) -> Self {
        self.std_error = Some(se);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}{}", self.name);
        self
    }
}

impl std::fmt::Display for StatReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let rule = match self.comparison {
            Comparison::AtMost => format!("<= {:.6}", self.threshold),
            Comparison::AtLeast => format!(">= {:.6}", self.threshold),
            Comparison::Within { target } => format!("= {target:.6} +/- {:.6}", self.threshold),
        };
        write!(f, "[{verdict}] {}: {:.6} (want {rule}, n = {})", self.name, self.value, self.n_samples)?;
        if let Some(note) = &self.note {
            write!(f, " -- {note}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_comparison() {
        assert!(StatReport::at_most("a", 1.0, 1.0, 1).passed);
        assert!(!StatReport::at_most("a", 1.1, 1.0, 1).passed);
        assert!(StatReport::at_least("a", 1.0, 0.5, 1).passed);
        assert!(StatReport::within("a", 3.0, 3.1, 0.2, 1).passed);
        assert!(!StatReport::within("a", 3.0, 3.3, 0.2, 1).passed);
        assert!(!StatReport::at_most("a", f64::NAN, 1.0, 1).passed);
    }

    #[test]
    fn json_record_fields() {
        let r = StatReport::at_most("x", 0.5, 1.0, 10).with_seed(4).with_std_error(0.1);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["name", "value", "std_error", "threshold", "passed", "n_samples", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
