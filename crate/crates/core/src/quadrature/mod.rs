//! One-dimensional Gauss rules, adaptive Gauss–Kronrod integration, exact
//! product rules on the sphere and seeded Monte Carlo clouds.

mod adaptive;
mod gauss;
mod montecarlo;
mod sphere;

pub use adaptive::{integrate_adaptive, integrate_adaptive_budget, AdaptiveResult};
pub use gauss::{gauss_jacobi, gauss_legendre, integrate_legendre};
pub use montecarlo::{map_chunks, map_chunks_for, mc_mean, mc_mean_for, sample_fubini_study, sample_sphere, CloudKind, SampleCloud};
pub use sphere::{build_sphere_rule, integrate_sphere, SphereRule};
