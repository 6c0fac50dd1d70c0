//! Spaces of homogeneous polynomials on `C^{d+1}` with the Bombieri inner
//! product, for which the normalized monomials `sqrt(N!/alpha!) zeta^alpha`
//! are orthonormal and `(zeta . conj(eta))^N` is the reproducing kernel.

mod affine;
mod combinatorics;
mod hompoly;
mod io;
mod multiindex;
mod point;
mod rotation;

pub use affine::{affine_kernel, normalized_affine_kernel, AffinePoly};
pub use combinatorics::{binomial, binomial_f64, incomplete_beta_int, ln_factorials, multinomial_f64};
pub use hompoly::{reproducing_kernel, HomPoly};
pub use io::{poly_from_json, poly_to_json, read_poly, write_poly, PolyFile, TermRecord};
pub use multiindex::{enumerate_multiindices, Basis, MultiIndex};
pub use point::{check_unit, hermitian, norm, normalize, SpherePoint};
pub use rotation::{check_unitary, random_unitary, unitary_with_first_column};

