use crate::error::{invalid, Error, Result};
use crate::function::GridFunction;
use crate::geometry::{build_cutoffs, certify_cone, cover_boundary, dilate, erode, ConeSpec, DomainMask, Grid};

/// Admissible shift lengths `(lower, upper)`.
///
/// Interpolated samples read cell corners up to `h·√N` away from the shifted
/// point, so that reach is added to `ε` before dividing by `sin θ`. Without it
/// the support can leak past the erosion on coarse grids.
fn shift_window(eps: f64, spec: &ConeSpec, grid: &Grid) -> (f64, f64) {
    let reach = grid.spacing() * (grid.dim() as f64).sqrt();
    ((eps + reach) / spec.theta.sin(), 0.5 * spec.rho)
}

/// Shift length used when none is prescribed: twice the lower end of the
/// admissible window, pulled back to its midpoint when that would overshoot.
pub fn default_shift(eps: f64, spec: &ConeSpec, grid: &Grid) -> f64 {
    let (lower, upper) = shift_window(eps, spec, grid);
    (2.0 * lower).min(0.5 * (lower + upper))
}

fn check_shift(eps: f64, spec: &ConeSpec, grid: &Grid, t: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    let (lower, upper) = shift_window(eps, spec, grid);
    if !(t > lower && t < upper) {
        return Err(invalid(format!("shift {t} outside the admissible window ({lower}, {upper})")));
    }
    Ok(())
}

/// `φ_0 u + Σ_i φ_i u(· + t n_i)` over the boundary cover of `mask`, with
/// `n_i` the certified cone direction at the i-th centre.
fn cone_shifted_sum(u: &GridFunction, mask: &DomainMask, spec: &ConeSpec, t: f64) -> Result<Vec<f64>> {
    let grid = *mask.grid();
    let cover = cover_boundary(mask, spec.rho)?;
    let cutoffs = build_cutoffs(&cover)?;
    let h = grid.spacing();
    let mut out: Vec<f64> = u
        .values()
        .iter()
        .zip(&cutoffs.functions[0])
        .map(|(v, phi)| v * phi)
        .collect();
    for (center, phi) in cover.centers.iter().zip(&cutoffs.functions[1..]) {
        let n = certify_cone(mask, spec, *center).ok_or(Error::MissingCone(*center))?;
        let shift = [t * n[0] / h, t * n[1] / h];
        for (k, &weight) in phi.iter().enumerate() {
            if weight > 0.0 {
                let (i, j) = grid.coords(k);
                out[k] += weight * u.sample_lattice([i as f64 + shift[0], j as f64 + shift[1]]);
            }
        }
    }
    Ok(out)
}

fn finish(values: Vec<f64>, target: &DomainMask, what: &str) -> Result<GridFunction> {
    if let Some(k) = (0..values.len()).find(|&k| values[k] != 0.0 && !target.contains(k)) {
        return Err(Error::Invariant(format!(
            "{what} is non-zero at node {k}, outside the target mask"
        )));
    }
    GridFunction::supported(target, values)
}

/// Moves a function supported on `mask` into `erode(mask, eps)` by sliding it
/// along cone directions near the boundary.
pub fn build_shifted_extension(
    u: &GridFunction,
    mask: &DomainMask,
    eps: f64,
    spec: &ConeSpec,
    t: f64,
) -> Result<GridFunction> {
    mask.grid().ensure_same(u.grid())?;
    check_shift(eps, spec, mask.grid(), t)?;
    if !u.vanishes_outside(mask) {
        return Err(invalid("input must vanish outside the mask"));
    }
    let target = erode(mask, eps)?;
    finish(cone_shifted_sum(u, mask, spec, t)?, &target, "shifted extension")
}

/// Moves a function supported on `dilate(mask, eps)` back into `mask`.
pub fn build_contracted_extension(
    w: &GridFunction,
    mask: &DomainMask,
    eps: f64,
    spec: &ConeSpec,
    t: f64,
) -> Result<GridFunction> {
    mask.grid().ensure_same(w.grid())?;
    check_shift(eps, spec, mask.grid(), t)?;
    if !w.vanishes_outside(&dilate(mask, eps)?) {
        return Err(invalid("input must vanish outside the dilated mask"));
    }
    finish(cone_shifted_sum(w, mask, spec, t)?, mask, "contracted extension")
}
