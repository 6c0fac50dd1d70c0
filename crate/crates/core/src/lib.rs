//! Homogeneous polynomials on the complex unit sphere, their concentration and
//! generalized Wehrl entropies, and the level-set machinery used to probe the
//! stability of the extremal (coherent-state) inequalities numerically.
//!
//! The crate is organised bottom-up:
//!
//! - [`polyspace`]: homogeneous and affine polynomial spaces, the Bombieri
//!   inner product, reproducing kernels and unitary rotations.
//! - [`quadrature`]: exact product rules on the sphere, seeded Monte Carlo
//!   clouds, Gauss–Jacobi and adaptive 1-D quadrature.
//! - [`levelsets`]: empirical distribution functions of `|Q|^2`, the
//!   extremal profile and the deficit integrals between them.
//! - [`functionals`]: supremum, distance to kernels, concentration, entropy,
//!   Fraenkel asymmetry and the stability coefficients.
//! - [`states`]: density operators, Husimi functions and trace distance to
//!   coherent states.
//! - [`experiments`]: sweeps that turn the inequalities into falsifiable
//!   numerical checks with CSV/JSON reports.
//!
//! All values are immutable; Monte Carlo estimates are reproducible from a
//! `u64` seed regardless of thread count.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod experiments;
pub mod functionals;
pub mod levelsets;
pub mod optimize;
pub mod polyspace;
pub mod quadrature;
pub mod rng;
pub mod states;

pub use error::{Error, Result};
pub use estimate::Estimate;
pub use num_complex::Complex64;
