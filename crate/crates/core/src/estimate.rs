use serde::{Deserialize, Serialize};
use std::fmt;

/// A numerical value with an optional standard error.
///
/// `stderr == None` marks a value obtained by a closed form or an exact rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: Option<f64>,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: None }
    }

    pub fn with_stderr(value: f64, stderr: f64) -> Self {
        Self {
            value,
            stderr: Some(stderr),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.stderr.is_none()
    }

    /// Standard error, reading an exact value as zero uncertainty.
    pub fn err(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }

    /// `self - other`, with standard errors combined in quadrature.
    pub fn minus(&self, other: &Estimate) -> Estimate {
        let stderr = match (self.stderr, other.stderr) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0.0).hypot(b.unwrap_or(0.0))),
        };
        Estimate {
            value: self.value - other.value,
            stderr,
        }
    }

    pub fn scale(&self, factor: f64) -> Estimate {
        Estimate {
            value: self.value * factor,
            stderr: self.stderr.map(|s| s * factor.abs()),
        }
    }

    pub fn shift(&self, offset: f64) -> Estimate {
        Estimate {
            value: self.value + offset,
            stderr: self.stderr,
        }
    }

    /// Formats the standard error column: a number or the literal `exact`.
    pub fn stderr_label(&self) -> String {
        match self.stderr {
            Some(s) => format!("{s:e}"),
            None => "exact".to_string(),
        }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stderr {
            Some(s) => write!(f, "{} ± {}", self.value, s),
            None => write!(f, "{} (exact)", self.value),
        }
    }
}

/// Running mean/variance accumulator (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

impl MeanAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Merges another accumulator (Chan et al. parallel update).
    pub fn merge(&mut self, other: &MeanAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::with_stderr(self.mean, self.stderr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut all = MeanAccumulator::new();
        xs.iter().for_each(|&x| all.push(x));
        let mut a = MeanAccumulator::new();
        let mut b = MeanAccumulator::new();
        xs[..37].iter().for_each(|&x| a.push(x));
        xs[37..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean() - all.mean()).abs() < 1e-14);
        assert!((a.variance() - all.variance()).abs() < 1e-13);
    }

    #[test]
    fn exact_minus_exact_stays_exact() {
        let d = Estimate::exact(1.0).minus(&Estimate::exact(0.25));
        assert!(d.is_exact());
        let e = Estimate::with_stderr(1.0, 0.3).minus(&Estimate::with_stderr(0.0, 0.4));
        assert!((e.err() - 0.5).abs() < 1e-15);
    }
}
