use serde::Serialize;

/// How a reported value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Closed-form expression.
    ClosedForm,
    /// Product rule that is exact for the integrand.
    ExactRule { degree: usize },
    /// Product rule for a non-polynomial integrand; the reported uncertainty is
    /// the difference to a coarser rule.
    ProductRule { degree: usize, reference_degree: usize },
    /// Nested adaptive Gauss–Kronrod integration; the uncertainty is its error estimate.
    Adaptive,
    MonteCarlo { samples: usize, seed: u64 },
    /// Exact cap value plus a Monte Carlo correction for the difference to the cap.
    CapControlVariate { samples: usize, seed: u64 },
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::ExactRule { .. } => "exact_rule",
            Method::ProductRule { .. } => "product_rule",
            Method::Adaptive => "adaptive",
            Method::MonteCarlo { .. } => "monte_carlo",
            Method::CapControlVariate { .. } => "cap_control_variate",
        }
    }
}
