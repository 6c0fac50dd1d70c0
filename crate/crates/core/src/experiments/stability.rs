use super::config::SweepConfig;
use super::generators::{generate, item_stream, Sample};
use crate::estimate::Estimate;
use crate::functionals::{
    alpha_coefficient, distance_from_sup, entropy_deficit, fraenkel_asymmetry, optimal_concentration,
    relative_concentration_deficit, stability_coefficient, sup_modulus, ConvexFn, PhiKind, RegionSpec, Settings,
    SupResult,
};
use crate::rng::{substream, Purpose};
use crate::Result;
use rand::RngCore;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::time::Instant;

/// Distance below which a polynomial counts as a kernel.
pub const EXTREMAL_DISTANCE: f64 = 1e-6;
/// Distance above which an unresolved entropy deficit is flagged.
pub const SUBTHRESHOLD_DISTANCE: f64 = 0.05;

fn stderr_column<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("exact"),
    }
}

/// Classification of one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "extremal")]
    Extremal,
    #[serde(rename = "ok")]
    Ok,
    /// Deficit below `-4 stderr`.
    #[serde(rename = "violation")]
    Violation,
    /// Deficit within `4 stderr` of zero at positive distance.
    #[serde(rename = "unresolved")]
    Unresolved,
    #[serde(rename = "excluded: linear")]
    ExcludedLinear,
    #[serde(rename = "possible N < N_Phi regime")]
    PossibleSubthreshold,
}

/// One (polynomial, parameter) evaluation of a stability sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRecord {
    pub kind: &'static str,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub index: usize,
    pub eps: Option<f64>,
    pub phi: Option<String>,
    pub omega: Option<f64>,
    pub t_sup: f64,
    pub distance_sqr: f64,
    pub deficit: f64,
    #[serde(serialize_with = "stderr_column")]
    pub deficit_stderr: Option<f64>,
    /// `N^d int_omega^{omega_tilde} (1 - s^{1/d})^N ds` for concentration records.
    pub coefficient: Option<f64>,
    pub alpha: Option<f64>,
    pub asymmetry: Option<f64>,
    pub asymmetry_sqr: Option<f64>,
    /// `deficit / D^2`, when `D > 1e-6`.
    pub ratio: Option<f64>,
    /// Smallest constant consistent with this record in the distance bound.
    pub implied_constant: Option<f64>,
    /// Same for the asymmetry bound.
    pub implied_constant_set: Option<f64>,
    pub method: String,
    pub status: Status,
}

impl StabilityRecord {
    pub fn deficit_estimate(&self) -> Estimate {
        Estimate {
            value: self.deficit,
            stderr: self.deficit_stderr,
        }
    }
}

/// Status of a deficit at squared distance `d2`.
pub fn classify(d2: f64, deficit: &Estimate) -> Status {
    let tol = 4.0 * deficit.err() + 1e-12;
    if deficit.value < -tol {
        Status::Violation
    } else if d2.max(0.0).sqrt() <= EXTREMAL_DISTANCE {
        Status::Extremal
    } else if deficit.value <= tol {
        Status::Unresolved
    } else {
        Status::Ok
    }
}

fn ratio(d2: f64, deficit: f64) -> Option<f64> {
    (d2.max(0.0).sqrt() > EXTREMAL_DISTANCE).then(|| deficit / d2)
}

/// Summary written next to the CSV of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub records: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub violations: usize,
    pub unresolved: usize,
    pub subthreshold: usize,
    pub excluded: usize,
    pub runtime_seconds: f64,
}

impl SweepSummary {
    pub fn from_records(records: &[StabilityRecord], runtime_seconds: f64) -> Self {
        let resolved = records.iter().filter(|r| r.status == Status::Ok).filter_map(|r| r.ratio);
        let (min_ratio, max_ratio) = resolved.fold((None, None), |(lo, hi): (Option<f64>, Option<f64>), x| {
            (Some(lo.map_or(x, |l| l.min(x))), Some(hi.map_or(x, |h| h.max(x))))
        });
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        Self {
            records: records.len(),
            min_ratio,
            max_ratio,
            violations: count(Status::Violation),
            unresolved: count(Status::Unresolved),
            subthreshold: count(Status::PossibleSubthreshold),
            excluded: count(Status::ExcludedLinear),
            runtime_seconds,
        }
    }
}

/// Result of a sweep.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub records: Vec<StabilityRecord>,
    pub summary: SweepSummary,
}

/// Writes one CSV row per record.
pub fn write_records_csv<W: std::io::Write>(records: &[StabilityRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn item_settings(config: &SweepConfig, n: usize, i: usize) -> Settings {
    let seed = substream(config.seed, Purpose::Optimizer, item_stream(n, i)).next_u64();
    config.settings().with_seed(seed)
}

fn for_each_item<F>(config: &SweepConfig, f: F) -> Result<Vec<StabilityRecord>>
where
    F: Fn(&Sample, usize, &Settings, &SupResult) -> Result<Vec<StabilityRecord>> + Sync,
{
    let mut records = Vec::new();
    for &n in &config.degrees {
        let samples = generate(config, n)?;
        let chunks: Vec<Result<Vec<StabilityRecord>>> = samples
            .par_iter()
            .map(|s| {
                let settings = item_settings(config, n, s.index);
                let sup = sup_modulus(&s.q, &settings)?;
                f(s, n, &settings, &sup)
            })
            .collect();
        for c in chunks {
            records.extend(c?);
        }
    }
    Ok(records)
}

/// Concentration stability: for each polynomial and `omega`, the relative
/// deficit `1 - C_{N,Omega}(Q)/C_{N,Omega*}(zeta_1^N)` on the superlevel set of
/// measure `omega`, against `D_N(Q)^2` and the coefficients of the distance and
/// asymmetry bounds.
pub fn sweep_concentration_stability(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate_concentration()?;
    let start = Instant::now();
    let d = config.d;
    let records = for_each_item(config, |s, n, settings, sup| {
        let d2 = distance_from_sup(sup.t).powi(2);
        config
            .omega
            .iter()
            .map(|&omega| {
                let oc = optimal_concentration(&s.q, omega, settings)?;
                let deficit = relative_concentration_deficit(&oc.estimate, n, d, omega)?;
                let coefficient = stability_coefficient(omega, n, d, config.omega_tilde)?;
                let alpha = alpha_coefficient(omega, n, d, config.omega_tilde)?;
                let asymmetry = if config.asymmetry {
                    let region = RegionSpec::Superlevel { q: s.q.clone(), omega };
                    Some(fraenkel_asymmetry(&region, n, d, settings)?.estimate.value)
                } else {
                    None
                };
                let status = classify(d2, &deficit);
                let positive = deficit.value > 0.0;
                Ok(StabilityRecord {
                    kind: "concentration",
                    d,
                    n,
                    index: s.index,
                    eps: s.eps,
                    phi: None,
                    omega: Some(omega),
                    t_sup: sup.t,
                    distance_sqr: d2,
                    deficit: deficit.value,
                    deficit_stderr: deficit.stderr,
                    coefficient: Some(coefficient),
                    alpha: Some(alpha),
                    asymmetry,
                    asymmetry_sqr: asymmetry.map(|a| a * a),
                    ratio: ratio(d2, deficit.value),
                    implied_constant: positive.then(|| d2 * coefficient / deficit.value),
                    implied_constant_set: asymmetry.filter(|_| positive).map(|a| a * a * alpha / deficit.value),
                    method: oc.method.label().to_string(),
                    status,
                })
            })
            .collect()
    })?;
    let summary = SweepSummary::from_records(&records, start.elapsed().as_secs_f64());
    Ok(SweepOutput { records, summary })
}

/// Entropy stability: `S_{N,Phi}(Q) - S_{N,Phi}(zeta_1^N)` against `D_N(Q)^2`
/// for each polynomial and each `Phi`. Linear `Phi` is excluded; a deficit
/// that cannot be told from zero at distance above 0.05 is flagged as a
/// possible sub-threshold degree rather than a failure.
pub fn sweep_wehrl_stability(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let start = Instant::now();
    let phis: Vec<ConvexFn> = config.phis()?;
    let d = config.d;
    let records = for_each_item(config, |s, n, settings, sup| {
        let d2 = distance_from_sup(sup.t).powi(2);
        phis.iter()
            .map(|phi| {
                let base = |deficit: Estimate, method: String, status: Status| StabilityRecord {
                    kind: "wehrl",
                    d,
                    n,
                    index: s.index,
                    eps: s.eps,
                    phi: Some(phi.tag()),
                    omega: None,
                    t_sup: sup.t,
                    distance_sqr: d2,
                    deficit: deficit.value,
                    deficit_stderr: deficit.stderr,
                    coefficient: None,
                    alpha: None,
                    asymmetry: None,
                    asymmetry_sqr: None,
                    ratio: None,
                    implied_constant: None,
                    implied_constant_set: None,
                    method,
                    status,
                };
                if let PhiKind::Linear { .. } = phi.kind() {
                    return Ok(base(Estimate::exact(0.0), "closed_form".into(), Status::ExcludedLinear));
                }
                let (deficit, method) = entropy_deficit(&s.q, phi, settings, Some(&sup.argmax))?;
                let mut status = classify(d2, &deficit);
                if status == Status::Unresolved && d2.sqrt() > SUBTHRESHOLD_DISTANCE {
                    status = Status::PossibleSubthreshold;
                }
                let mut r = base(deficit, method.label().to_string(), status);
                r.ratio = ratio(d2, deficit.value);
                r.implied_constant = (deficit.value > 0.0).then(|| d2 / deficit.value);
                Ok(r)
            })
            .collect()
    })?;
    let summary = SweepSummary::from_records(&records, start.elapsed().as_secs_f64());
    Ok(SweepOutput { records, summary })
}
