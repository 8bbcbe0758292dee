//! Exact node-set distances.
//!
//! Distances are measured between lattice nodes. Squared distances are
//! computed in integer lattice units by a separable Euclidean distance
//! transform and converted once through [`Grid::length_of`].

use super::grid::Grid;
use super::mask::DomainMask;
use crate::error::{Error, Result};

/// Squared lattice distance from every node to the nearest node of `set`;
/// `None` where `set` is empty.
pub fn squared_distance_transform(grid: &Grid, set: &[bool]) -> Vec<Option<u64>> {
    let [nx, ny] = grid.counts();
    let mut rows: Vec<Option<u64>> = set.iter().map(|&b| if b { Some(0) } else { None }).collect();
    let mut line_in = Vec::with_capacity(nx.max(ny));
    let mut line_out = Vec::with_capacity(nx.max(ny));
    for j in 0..ny {
        line_in.clear();
        line_in.extend((0..nx).map(|i| rows[grid.index(i, j)]));
        lower_envelope(&line_in, &mut line_out);
        for i in 0..nx {
            rows[grid.index(i, j)] = line_out[i];
        }
    }
    if grid.dim() == 2 {
        for i in 0..nx {
            line_in.clear();
            line_in.extend((0..ny).map(|j| rows[grid.index(i, j)]));
            lower_envelope(&line_in, &mut line_out);
            for j in 0..ny {
                rows[grid.index(i, j)] = line_out[j];
            }
        }
    }
    rows
}

/// One-dimensional squared-distance transform (Felzenszwalb–Huttenlocher)
/// with exact rational breakpoints.
fn lower_envelope(f: &[Option<u64>], out: &mut Vec<Option<u64>>) {
    out.clear();
    let sites: Vec<(i128, i128)> = f
        .iter()
        .enumerate()
        .filter_map(|(q, v)| v.map(|v| (q as i128, v as i128)))
        .collect();
    if sites.is_empty() {
        out.resize(f.len(), None);
        return;
    }
    // Breakpoint between parabolas rooted at p < q, as a fraction num/den, den > 0.
    let meet = |p: (i128, i128), q: (i128, i128)| -> (i128, i128) {
        let num = (q.1 + q.0 * q.0) - (p.1 + p.0 * p.0);
        let den = 2 * (q.0 - p.0);
        (num, den)
    };
    let mut hull: Vec<(i128, i128)> = Vec::with_capacity(sites.len());
    let mut starts: Vec<(i128, i128)> = Vec::with_capacity(sites.len());
    for &site in &sites {
        loop {
            match hull.last() {
                None => {
                    hull.push(site);
                    starts.push((i128::MIN / 4, 1));
                    break;
                }
                Some(&top) => {
                    let z = meet(top, site);
                    let start = *starts.last().unwrap();
                    // remove `top` when the new parabola takes over at or before its start
                    if hull.len() > 1 && z.0 * start.1 <= start.0 * z.1 {
                        hull.pop();
                        starts.pop();
                        continue;
                    }
                    hull.push(site);
                    starts.push(z);
                    break;
                }
            }
        }
    }
    let mut k = 0;
    for q in 0..f.len() as i128 {
        while k + 1 < hull.len() && starts[k + 1].0 < q * starts[k + 1].1 {
            k += 1;
        }
        let (p, v) = hull[k];
        out.push(Some(((q - p) * (q - p) + v) as u64));
    }
}

/// Largest squared lattice distance from a node of `e` to the set `f`.
fn excess_dist2(grid: &Grid, e: &[bool], f: &[bool]) -> Result<u64> {
    if !e.iter().any(|&b| b) {
        return Ok(0);
    }
    if !f.iter().any(|&b| b) {
        return Err(Error::EmptySet("excess towards an empty set".into()));
    }
    let dt = squared_distance_transform(grid, f);
    Ok(e.iter()
        .zip(&dt)
        .filter(|(&inside, _)| inside)
        .map(|(_, d)| d.expect("non-empty target"))
        .max()
        .unwrap_or(0))
}

/// Excess of one node set over another on the same grid.
pub fn excess_of_sets(grid: &Grid, e: &[bool], f: &[bool]) -> Result<f64> {
    Ok(grid.length_of(excess_dist2(grid, e, f)?))
}

/// `e(E, F) = sup_{x ∈ E} d(x, F)`; zero for empty `E`.
pub fn excess(e: &DomainMask, f: &DomainMask) -> Result<f64> {
    e.grid().ensure_same(f.grid())?;
    excess_of_sets(e.grid(), e.as_slice(), f.as_slice())
}

/// `d_H(E, F) = e(E, F) + e(F, E)`.
pub fn hausdorff(e: &DomainMask, f: &DomainMask) -> Result<f64> {
    Ok(excess(e, f)? + excess(f, e)?)
}

/// Internal excess `e^c(F, E) = e(box \ E, box \ F)`.
pub fn complementary_excess(f: &DomainMask, e: &DomainMask) -> Result<f64> {
    f.grid().ensure_same(e.grid())?;
    excess_of_sets(e.grid(), &e.complement(), &f.complement())
}

/// Complementary Hausdorff distance `e^c(F, E) + e^c(E, F)`.
pub fn complementary_hausdorff(e: &DomainMask, f: &DomainMask) -> Result<f64> {
    Ok(complementary_excess(f, e)? + complementary_excess(e, f)?)
}

/// Asymmetric boundary-proximity distance `e(E, F) + e^c(F, E)`.
pub fn dfront(e: &DomainMask, f: &DomainMask) -> Result<f64> {
    Ok(excess(e, f)? + complementary_excess(f, e)?)
}
