use super::config::SweepConfig;
use super::generators::{generate, item_stream};
use crate::functionals::sup_modulus;
use crate::levelsets::{check_differential_inequality, check_ratio_monotonicity, AuditStatus, LevelProfile};
use crate::rng::{substream, Purpose};
use crate::Result;
use rand::RngCore;
use serde::Serialize;

/// Suggested minimum sample count of the audit.
pub const AUDIT_SAMPLES: usize = 10_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct AuditItem {
    #[serde(rename = "N")]
    pub n: usize,
    pub index: usize,
    pub t_sup: f64,
    pub t_lo: f64,
    pub points: usize,
    pub flagged: usize,
    pub significant: usize,
    pub inconclusive: usize,
    pub status: AuditStatus,
    pub monotonicity_checked: usize,
    pub monotonicity_significant: usize,
    pub monotonicity_status: AuditStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub d: usize,
    pub samples: usize,
    pub omega_tilde: f64,
    pub items: Vec<AuditItem>,
    pub significant: usize,
    pub monotonicity_significant: usize,
    pub status: AuditStatus,
}

/// Differential-inequality and ratio-monotonicity audit of the empirical level
/// profiles of the configured polynomials on `(mu^{-1}(omega_tilde), T)`.
pub fn differential_inequality_audit(config: &SweepConfig) -> Result<AuditReport> {
    config.validate()?;
    if config.samples < AUDIT_SAMPLES {
        log::warn!("audit with {} samples; at least {AUDIT_SAMPLES} are recommended", config.samples);
    }
    let mut items = Vec::new();
    for &n in &config.degrees {
        for s in generate(config, n)? {
            let seed = substream(config.seed, Purpose::Optimizer, item_stream(n, s.index)).next_u64();
            let settings = config.settings().with_seed(seed);
            let sup = sup_modulus(&s.q, &settings)?;
            let profile = LevelProfile::sample(&s.q, config.samples, seed, Some(sup.t))?;
            let ode = check_differential_inequality(&profile, config.omega_tilde, config.grid);
            let mono = check_ratio_monotonicity(&profile, config.omega_tilde, config.grid);
            items.push(AuditItem {
                n,
                index: s.index,
                t_sup: profile.t_sup(),
                t_lo: ode.t_lo,
                points: ode.points.len(),
                flagged: ode.flagged,
                significant: ode.significant,
                inconclusive: ode.inconclusive,
                status: ode.status,
                monotonicity_checked: mono.checked,
                monotonicity_significant: mono.significant,
                monotonicity_status: mono.status,
            });
        }
    }
    let significant = items.iter().map(|i| i.significant).sum();
    let monotonicity_significant = items.iter().map(|i| i.monotonicity_significant).sum();
    let status = if significant + monotonicity_significant > 0 {
        AuditStatus::Violations
    } else if items.iter().all(|i| i.status == AuditStatus::Inconclusive) {
        AuditStatus::Inconclusive
    } else {
        AuditStatus::Pass
    };
    Ok(AuditReport {
        d: config.d,
        samples: config.samples,
        omega_tilde: config.omega_tilde,
        items,
        significant,
        monotonicity_significant,
        status,
    })
}
