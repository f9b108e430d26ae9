//! Exact integer side: the Pascal matrix, its characteristic polynomial,
//! D(L, theta) as a cosine polynomial, the lattice-path oracle and the
//! on-disk coefficient cache.

mod cache;
mod charpoly;
mod dfunc;
mod matrix;
mod paths;
mod theta;

pub use cache::CharPolyCache;
pub use charpoly::{char_poly, CharPolyRecord};
pub use dfunc::{CosineForm, QuadraticValue, MAX_DERIVATIVE_ORDER};
pub use matrix::{pascal_matrix, ExactMatrix};
pub use paths::{path_counts, path_weight_oracle, MAX_ENUMERATION_SIZE};
pub use theta::{cos_pi_rational, ThetaValue};

use rug::Float;

use crate::error::Result;
use crate::mpnum::PrecisionContext;

/// D(L, theta), computing the characteristic polynomial on the fly.
pub fn eval_d(l: usize, theta: &ThetaValue, ctx: &PrecisionContext) -> Result<Float> {
    Ok(CosineForm::new(&char_poly(l)?)?.eval(theta, ctx))
}

/// D(L, theta) and its theta-derivatives up to `max_order`.
pub fn eval_d_derivatives(l: usize, theta: &ThetaValue, max_order: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    CosineForm::new(&char_poly(l)?)?.derivatives(theta, max_order, ctx)
}
