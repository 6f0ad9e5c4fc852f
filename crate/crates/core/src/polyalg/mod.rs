//! Exact integer polynomials, characteristic polynomials, cyclotomic
//! stripping and complex root extraction.

mod charpoly;
mod cyclotomic;
mod matrix;
mod poly;
mod roots;

pub use charpoly::{charpoly, charpoly_berkowitz, spectral_determinant};
pub use cyclotomic::{cyclotomic, cyclotomic_factors, strip_cyclotomic};
pub use matrix::IntMatrix;
pub use poly::IntPolynomial;
pub use roots::{
    circle_union_distance, growth_rate, hausdorff, largest_real_root, off_circle_roots,
    root_set_distance, roots, tip_growth_rate, Root, RootSet, DEFAULT_CIRCLE_BAND,
    DEFAULT_ROOT_TOLERANCE,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("the zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("root iteration did not converge (degree {degree}, residual {residual:e})")]
    NonConvergence { degree: usize, residual: f64 },
}
