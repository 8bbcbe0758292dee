use super::distance::squared_distance_transform;
use super::mask::DomainMask;
use crate::error::{invalid, Error, Result};

/// `Ω^{-ε} = {x ∈ Ω : B_ε(x) ⊆ Ω}` on grid nodes; a node `y` lies in `B_ε(x)`
/// iff `|y - x| < ε`. May return an empty mask.
pub fn erode(mask: &DomainMask, eps: f64) -> Result<DomainMask> {
    if !(eps > 0.0) {
        return Err(invalid(format!("erosion radius must be positive, got {eps}")));
    }
    let grid = *mask.grid();
    let to_outside = squared_distance_transform(&grid, &mask.complement());
    let inside = (0..grid.len())
        .map(|k| {
            mask.contains(k)
                && match to_outside[k] {
                    Some(d2) => grid.length_of(d2) >= eps,
                    None => true,
                }
        })
        .collect();
    DomainMask::new(grid, inside)
}

/// `Ω^{ε} = {x : d(x, Ω) < ε}` on grid nodes.
///
/// Fails when the dilated set reaches the outermost grid layer.
pub fn dilate(mask: &DomainMask, eps: f64) -> Result<DomainMask> {
    if !(eps > 0.0) {
        return Err(invalid(format!("dilation radius must be positive, got {eps}")));
    }
    let grid = *mask.grid();
    let to_mask = squared_distance_transform(&grid, mask.as_slice());
    let inside: Vec<bool> = to_mask
        .iter()
        .map(|d| d.is_some_and(|d2| grid.length_of(d2) < eps))
        .collect();
    if let Some(k) = (0..grid.len()).find(|&k| inside[k] && grid.is_outer_layer(k)) {
        return Err(Error::BoundaryContact(format!(
            "dilation by {eps} reaches node {k}; enlarge the bounding box"
        )));
    }
    DomainMask::new(grid, inside)
}
