//! Grid laboratory for the restricted fractional Laplacian `(-Δ)^s` on
//! bounded domains with zero exterior data.
//!
//! The crate assembles discrete operators, solves Dirichlet and eigenvalue
//! problems, measures set distances between domain masks, and fits log-log
//! rates for the quantities that control stability under domain
//! perturbation.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod fit;
pub mod fourier;
pub mod function;
pub mod geometry;
pub mod norms;
pub mod operator;
pub mod oracles;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use function::GridFunction;
pub use operator::FracStiffness;
