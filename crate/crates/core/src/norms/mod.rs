//! Norms, seminorms and translation operators on grid functions.

mod besov;
mod commutator;
mod fourier;
mod gagliardo;
mod translation;

pub use besov::{
    besov_quotients, difference_moduli, regularity_ceiling, BesovEstimate, DyadicRange, CEILING_STEP,
    MIN_STEP_CELLS,
};
pub use commutator::commutator;
pub use fourier::{bessel_apply, bessel_solve, hminus_norm, pad, padded_grid};
pub use gagliardo::{energy_norm, gagliardo_seminorm, l2_norm};
pub use translation::{box_margin, localized_translate, translate, CutoffFn};
