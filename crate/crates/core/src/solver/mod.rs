//! Dirichlet solves, energy projections and cone-shifted extensions.

mod cg;
mod dirichlet;
mod extension;

pub use cg::{conjugate_gradient, CgOutcome};
pub use dirichlet::{project, solve_dirichlet, DirichletSolver, SolveReport, DEFAULT_TOL};
pub use extension::{build_contracted_extension, build_shifted_extension, default_shift};
