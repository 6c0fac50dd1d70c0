use serde::{Deserialize, Serialize};

/// Numerical knobs shared by the functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Monte Carlo sample count.
    pub samples: usize,
    pub seed: u64,
    /// Degree of the sphere product rule; `None` picks a default from `N`.
    pub rule_degree: Option<usize>,
    /// Number of multistart points for the supremum search.
    pub starts: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            samples: 200_000,
            seed: 0,
            rule_degree: None,
            starts: 64,
        }
    }
}

impl Settings {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_samples(self, samples: usize) -> Self {
        Self { samples, ..self }
    }
}
