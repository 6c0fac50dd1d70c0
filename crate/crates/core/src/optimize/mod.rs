//! Derivative-free and Riemannian local optimizers used by the multistart searches.

mod halton;
mod neldermead;
mod sphere_ascent;

pub use halton::{halton, radical_inverse};
pub use neldermead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use sphere_ascent::{maximize_on_sphere, AscentOptions, AscentResult};
