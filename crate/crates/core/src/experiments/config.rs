use crate::functionals::{ConvexFn, Settings};
use crate::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize};
use std::path::{Path, PathBuf};

/// How the polynomials of a sweep are produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    /// Gaussian coordinates in the orthonormal monomial basis, normalized.
    #[default]
    Random,
    /// `K_eta + eps X` with `X` a random unit vector orthogonal to `K_eta`,
    /// normalized, with `eps` log-spaced over the sample.
    NearKernel {
        #[serde(default = "default_eps_min")]
        eps_min: f64,
        #[serde(default = "default_eps_max")]
        eps_max: f64,
    },
    /// Reproducing kernels at random centers.
    Kernel,
    /// `(zeta_1^N + eps zeta_1^{N-1} zeta_2) / sqrt(1 + eps^2/N)`, one per `eps`.
    Sharpness { eps: Vec<f64> },
    /// Polynomials read from JSON files.
    Files { paths: Vec<PathBuf> },
}

fn default_eps_min() -> f64 {
    0.01
}

fn default_eps_max() -> f64 {
    0.5
}

fn default_phi() -> Vec<String> {
    vec!["xlogx".into()]
}

fn default_omega() -> Vec<f64> {
    vec![0.1]
}

fn default_omega_tilde() -> f64 {
    0.3
}

fn default_count() -> usize {
    100
}

fn default_samples() -> usize {
    200_000
}

fn default_starts() -> usize {
    64
}

fn default_grid() -> usize {
    40
}

fn one_or_many<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<usize>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(usize),
        Many(Vec<usize>),
    }
    Ok(match OneOrMany::deserialize(de)? {
        OneOrMany::One(n) => vec![n],
        OneOrMany::Many(v) => v,
    })
}

/// Configuration of a stability sweep, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub d: usize,
    /// Degree or list of degrees.
    #[serde(rename = "N", deserialize_with = "one_or_many")]
    pub degrees: Vec<usize>,
    #[serde(default = "default_phi")]
    pub phi: Vec<String>,
    #[serde(default = "default_omega")]
    pub omega: Vec<f64>,
    #[serde(default = "default_omega_tilde")]
    pub omega_tilde: f64,
    #[serde(default)]
    pub generator: Generator,
    /// Polynomials per degree (ignored by the sharpness and file generators).
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default)]
    pub rule_degree: Option<usize>,
    /// Also estimate the Fraenkel asymmetry of each superlevel set.
    #[serde(default)]
    pub asymmetry: bool,
    /// Grid size of the differential-inequality audit.
    #[serde(default = "default_grid")]
    pub grid: usize,
}

impl SweepConfig {
    pub fn new(d: usize, n: usize) -> Self {
        Self {
            d,
            degrees: vec![n],
            phi: default_phi(),
            omega: default_omega(),
            omega_tilde: default_omega_tilde(),
            generator: Generator::Random,
            count: default_count(),
            samples: default_samples(),
            seed: 0,
            starts: default_starts(),
            rule_degree: None,
            asymmetry: false,
            grid: default_grid(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks grids and ranges shared by all sweeps.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.d == 0 {
            return fail("d must be at least 1".into());
        }
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return fail("N must be a nonempty list of positive degrees".into());
        }
        if self.phi.is_empty() {
            return fail("phi list is empty".into());
        }
        self.phis()?;
        if self.omega.is_empty() {
            return fail("omega grid is empty".into());
        }
        if let Some(w) = self.omega.iter().find(|w| !(**w > 0.0 && **w < 1.0)) {
            return fail(format!("omega {w} outside (0, 1)"));
        }
        if !(self.omega_tilde > 0.0 && self.omega_tilde <= 1.0) {
            return fail(format!("omega_tilde {} outside (0, 1]", self.omega_tilde));
        }
        if self.count == 0 || self.samples == 0 || self.starts == 0 || self.grid == 0 {
            return fail("count, samples, starts and grid must be positive".into());
        }
        match &self.generator {
            Generator::NearKernel { eps_min, eps_max } if !(*eps_min > 0.0 && eps_min <= eps_max) => {
                fail(format!("near-kernel range [{eps_min}, {eps_max}] is invalid"))
            }
            Generator::Sharpness { eps } if eps.is_empty() || eps.iter().any(|e| !(*e >= 0.0 && *e <= 1.0)) => {
                fail("sharpness eps list must be nonempty with entries in [0, 1]".into())
            }
            Generator::Files { paths } if paths.is_empty() => fail("file generator needs at least one path".into()),
            _ => Ok(()),
        }
    }

    /// Additional constraint of concentration sweeps: every `omega < omega_tilde`.
    pub fn validate_concentration(&self) -> Result<()> {
        self.validate()?;
        if let Some(w) = self.omega.iter().find(|w| **w >= self.omega_tilde) {
            return Err(Error::Config(format!(
                "omega {w} must be below omega_tilde {}",
                self.omega_tilde
            )));
        }
        Ok(())
    }

    pub fn phis(&self) -> Result<Vec<ConvexFn>> {
        self.phi.iter().map(|s| s.parse()).collect()
    }

    pub fn settings(&self) -> Settings {
        Settings {
            samples: self.samples,
            seed: self.seed,
            rule_degree: self.rule_degree,
            starts: self.starts,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalar_or_list_degrees() {
        let a = SweepConfig::from_json(r#"{"d": 1, "N": 4}"#).unwrap();
        assert_eq!(a.degrees, vec![4]);
        let b = SweepConfig::from_json(r#"{"d": 2, "N": [4, 8], "generator": {"kind": "near_kernel"}}"#).unwrap();
        assert_eq!(b.degrees, vec![4, 8]);
        assert_eq!(b.generator, Generator::NearKernel { eps_min: 0.01, eps_max: 0.5 });
        assert!(SweepConfig::from_json(r#"{"d": 1, "N": 4, "bogus": 1}"#).is_err());
        let c = SweepConfig::from_json(r#"{"d": 2, "N": 4, "omega": [0.4], "omega_tilde": 0.3}"#).unwrap();
        assert!(matches!(c.validate_concentration(), Err(Error::Config(_))));
    }
}
