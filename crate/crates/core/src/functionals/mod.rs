//! Functionals of unit-norm polynomials: supremum and distance to the
//! reproducing kernels, concentration in regions, generalized Wehrl entropy
//! and Fraenkel asymmetry.

mod caps;
mod concentration;
mod convex;
mod entropy;
mod fraenkel;
mod method;
mod record;
mod region;
mod settings;
mod sup;

pub use caps::{alpha_coefficient, cap_level, cap_measure, extremal_concentration, stability_coefficient};
pub use convex::{ConvexFn, PhiKind};
pub use settings::Settings;
pub use sup::{distance_from_sup, distance_to_kernels, min_kernel_distance_sqr, sup_modulus, SupResult, NORM_TOL};
pub use concentration::{
    cap_concentration, concentration, concentration_mc, optimal_concentration, relative_concentration_deficit,
    ConcentrationResult, OptimalConcentration,
};
pub use method::Method;
pub use region::{Indicator, RegionSpec, ResolvedRegion};
pub use entropy::{
    default_rule_degree, entropy_binary_adaptive, entropy_deficit, entropy_mc, entropy_on_rule, extremal_entropy, field_entropy,
    is_binary, max_rule_degree, wehrl_entropy, EntropyResult, ModulusField,
};
pub use fraenkel::{fraenkel_asymmetry, FraenkelResult};
pub use record::ResultRecord;
pub(crate) use sup::{check_normalized, modulus_and_gradient};
