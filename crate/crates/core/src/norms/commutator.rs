use super::translation::CutoffFn;
use crate::error::Result;
use crate::function::GridFunction;
use crate::operator::FracStiffness;

/// `A(φw) - w·Aφ - φ·Aw` nodewise, where `A` is the operator of order `s/2`.
pub fn commutator(half: &FracStiffness, cutoff: &CutoffFn, w: &GridFunction) -> Result<GridFunction> {
    let phi = &cutoff.phi;
    let product = phi.mul(w)?;
    let a_product = half.apply(&product)?;
    let a_phi = half.apply(phi)?;
    let a_w = half.apply(w)?;
    let values = a_product
        .values()
        .iter()
        .zip(a_phi.values())
        .zip(a_w.values())
        .zip(w.values().iter().zip(phi.values()))
        .map(|(((ap, aphi), aw), (wv, pv))| ap - wv * aphi - pv * aw)
        .collect();
    GridFunction::free(*w.grid(), values)
}
