//! Sweeps that test the stability inequalities numerically and write CSV/JSON reports.

mod audit;
mod config;
mod fock;
mod generators;
mod sharpness;
mod stability;

pub use audit::{differential_inequality_audit, AuditItem, AuditReport, AUDIT_SAMPLES};
pub use config::{Generator, SweepConfig};
pub use fock::{fock_limit_check, fock_norm_sqr, rescale_to_degree, FockPoint, FockReport};
pub use generators::{generate, item_stream, log_spaced, near_kernel, random_center, sharpness_polynomial, Sample};
pub use sharpness::{
    loglog_slope, sharpness_family, SharpnessPoint, SharpnessReport, EXPECTED_DEFICIT_SLOPE, EXPECTED_DISTANCE_SLOPE,
};
pub use stability::{
    classify, sweep_concentration_stability, sweep_wehrl_stability, write_records_csv, StabilityRecord, Status,
    SweepOutput, SweepSummary, EXTREMAL_DISTANCE, SUBTHRESHOLD_DISTANCE,
};
