use super::method::Method;
use crate::estimate::Estimate;
use crate::{Complex64, Result};
use serde::Serialize;
use serde_json::Value;

/// Machine-readable result of one functional evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub functional: String,
    pub value: f64,
    /// `None` marks an exact value.
    pub stderr: Option<f64>,
    /// Maximizer or best cap center as interleaved `[re, im, ...]`.
    pub argmax: Option<Vec<f64>>,
    pub config: Value,
    pub method: Option<Method>,
}

impl ResultRecord {
    pub fn new(functional: &str, estimate: &Estimate, config: Value) -> Self {
        Self {
            functional: functional.to_string(),
            value: estimate.value,
            stderr: estimate.stderr,
            argmax: None,
            config,
            method: None,
        }
    }

    pub fn with_argmax(mut self, point: &[Complex64]) -> Self {
        self.argmax = Some(point.iter().flat_map(|c| [c.re, c.im]).collect());
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = Some(method);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
