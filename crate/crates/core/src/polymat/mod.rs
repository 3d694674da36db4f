//! Sparse multivariate polynomials over exact scalars and exact rank of
//! integer matrices.

mod matrix;
mod poly;

pub use matrix::IntMatrix;
pub use poly::{monomial_string, Exponent, Scalar, SparsePoly};
