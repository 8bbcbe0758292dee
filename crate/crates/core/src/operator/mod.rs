//! Discrete restricted fractional Laplacian and its normalization constant.

mod coeffs;
mod normalization;
mod stiffness;

pub use coeffs::centered_coeffs;
pub use normalization::{
    closed_form_constant, normalization_constant, quadrature_constant, Normalization,
};
pub(crate) use normalization::check_order;
pub use stiffness::{FracStiffness, RestrictedStiffness};
