//! Distribution functions of `U = |Q|^2` on the sphere, the extremal profile
//! `(1 - t^{1/N})^d` of the coherent state, and the comparisons between them.

mod crossing;
mod extremal;
mod odecheck;
mod profile;
mod stats;

pub use crossing::{crossing_points, deficit_integrals, Crossing, Deficits};
pub use extremal::ExtremalProfile;
pub use odecheck::{
    check_differential_inequality, check_ratio_monotonicity, ode_range_start, AuditStatus, MonotonicityReport,
    OdeReport, SlopePoint,
};
pub use profile::{write_profile_csv, LevelProfile};
pub use stats::{bonferroni_z, normal_upper_tail};
