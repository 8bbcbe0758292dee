#![allow(dead_code)]

use fraclab::geometry::{DomainMask, Grid};
use proptest::prelude::*;

/// Squared lattice distance from every node to the nearest node of `set`,
/// by exhaustive search.
pub fn brute_dist2(grid: &Grid, set: &[bool]) -> Vec<Option<u64>> {
    (0..grid.len())
        .map(|a| {
            (0..grid.len())
                .filter(|&b| set[b])
                .map(|b| grid.lattice_dist2(a, b))
                .min()
        })
        .collect()
}

/// `sup_{x ∈ e} min_{y ∈ f} |x - y|` by a double loop.
pub fn brute_excess(grid: &Grid, e: &[bool], f: &[bool]) -> f64 {
    let mut worst = 0u64;
    for a in (0..grid.len()).filter(|&a| e[a]) {
        let near = (0..grid.len())
            .filter(|&b| f[b])
            .map(|b| grid.lattice_dist2(a, b))
            .min()
            .expect("non-empty target");
        worst = worst.max(near);
    }
    grid.length_of(worst)
}

pub fn complement(mask: &DomainMask) -> Vec<bool> {
    mask.as_slice().iter().map(|b| !b).collect()
}

/// Random mask off the outer layer with at least one interior node.
pub fn mask_on(grid: Grid, bits: &[bool]) -> DomainMask {
    let mut inside: Vec<bool> = (0..grid.len())
        .map(|k| !grid.is_outer_layer(k) && bits[k % bits.len()])
        .collect();
    if !inside.iter().any(|b| *b) {
        let [nx, ny] = grid.counts();
        inside[grid.index(nx / 2, ny / 2)] = true;
    }
    DomainMask::new(grid, inside).unwrap()
}

/// A 1D grid of up to 256 nodes or a 2D grid of up to 48² nodes, with a
/// pair of random masks on it.
pub fn mask_pair(max_1d: usize, max_2d: usize) -> impl Strategy<Value = (DomainMask, DomainMask)> {
    let one = (5usize..=max_1d).prop_map(|n| Grid::line(0.0, 1.0 / n as f64, n).unwrap());
    let two = (5usize..=max_2d, 5usize..=max_2d)
        .prop_map(|(a, b)| Grid::plane([0.0, 0.0], 0.1, [a, b]).unwrap());
    prop_oneof![one, two].prop_flat_map(|g| {
        let n = g.len();
        (
            Just(g),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(g, a, b)| (mask_on(g, &a), mask_on(g, &b)))
    })
}
