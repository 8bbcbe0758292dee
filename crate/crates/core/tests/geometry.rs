mod common;

use common::{brute_dist2, brute_excess, complement, mask_pair};
use fraclab::geometry::*;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_8;

fn disk(radius: f64, n: usize) -> DomainMask {
    let g = Grid::plane([-1.5, -1.5], 3.0 / n as f64, [n + 1, n + 1]).unwrap();
    DomainSpec::Ball {
        center: vec![0.0, 0.0],
        radius,
    }
    .on_grid(g)
    .unwrap()
}

#[test]
fn disk_erosion_matches_brute_force() {
    let m = disk(1.0, 60);
    let g = *m.grid();
    let outside = brute_dist2(&g, &complement(&m));
    let eroded = erode(&m, 0.3).unwrap();
    for k in 0..g.len() {
        let expected = m.contains(k) && outside[k].is_some_and(|d| g.length_of(d) >= 0.3);
        assert_eq!(eroded.contains(k), expected, "node {k}");
    }
    let h = g.spacing();
    for k in eroded.indices() {
        let p = g.point(k);
        assert!((p[0] * p[0] + p[1] * p[1]).sqrt() < 0.7 + h);
    }
    assert!(hausdorff(&eroded, &disk(0.7, 60)).unwrap() <= 1.5 * h);
}

#[test]
fn disk_dilation_reaches_unit_radius() {
    let small = disk(0.7, 60);
    let grown = dilate(&small, 0.3).unwrap();
    let h = small.grid().spacing();
    assert!(hausdorff(&grown, &disk(1.0, 60)).unwrap() <= 1.5 * h);
    let g = *small.grid();
    let near = brute_dist2(&g, small.as_slice());
    for k in 0..g.len() {
        assert_eq!(grown.contains(k), near[k].is_some_and(|d| g.length_of(d) < 0.3));
    }
}

#[test]
fn square_corner_accepts_the_diagonal() {
    let spec = DomainSpec::Box {
        lo: vec![-1.0, -1.0],
        hi: vec![1.0, 1.0],
    };
    let m = spec.discretize(80).unwrap();
    let diagonal = [std::f64::consts::FRAC_1_SQRT_2; 2];
    let cone = ConeSpec::new(0.1, FRAC_PI_8, vec![diagonal, [-diagonal[0], -diagonal[1]]]).unwrap();
    assert!(direction_passes(&m, &cone, [1.0, 1.0], diagonal));
    assert_eq!(certify_cone(&m, &cone, [1.0, 1.0]), Some(diagonal));
}

#[test]
fn disk_tube_cover_obeys_cardinality_bound() {
    let m = disk(1.0, 60);
    let cover = cover_boundary(&m, 0.3).unwrap();
    assert!(cover.covers(&boundary_tube(&m, 0.3)));
    assert!(cover.half_balls_disjoint());
    assert!((cover.len() as f64) <= cover.cardinality_bound);
    let family = build_cutoffs(&cover).unwrap();
    assert!(family.partition_residual() <= 1e-12);
    assert!(family.max_gradient() <= family.lipschitz_bound);
    let g = cover.grid;
    for (i, phi) in family.functions.iter().enumerate() {
        for (k, &v) in phi.iter().enumerate() {
            assert!((0.0..=1.0).contains(&v));
            let nearest = cover
                .center_nodes
                .iter()
                .map(|&c| g.node_distance(k, c))
                .fold(f64::INFINITY, f64::min);
            if i == 0 {
                if nearest >= 2.0 * cover.radius {
                    assert_eq!(v, 1.0);
                }
                if nearest < cover.radius {
                    assert_eq!(v, 0.0);
                }
            } else if v > 0.0 {
                assert!(g.node_distance(k, cover.center_nodes[i - 1]) < 2.0 * cover.radius);
            }
        }
    }
}

#[test]
fn concentric_intervals_dfront_is_the_gap() {
    let a = DomainSpec::Interval { a: -1.0, b: 1.0 }.discretize(400).unwrap();
    let h = a.grid().spacing();
    for eps in [0.05, 0.1, 0.2] {
        let b = DomainSpec::Interval {
            a: -1.0 + eps,
            b: 1.0 - eps,
        }
        .on_grid(*a.grid())
        .unwrap();
        let d = dfront(&b, &a).unwrap();
        assert!((d - eps).abs() <= h, "{d} vs {eps}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_match_double_loop((e, f) in mask_pair(64, 14)) {
        let g = *e.grid();
        prop_assert_eq!(excess(&e, &f).unwrap(), brute_excess(&g, e.as_slice(), f.as_slice()));
        prop_assert_eq!(
            complementary_excess(&f, &e).unwrap(),
            brute_excess(&g, &complement(&e), &complement(&f))
        );
    }

    #[test]
    fn excess_vanishes_exactly_on_inclusion((e, f) in mask_pair(64, 14)) {
        prop_assert_eq!(excess(&e, &f).unwrap() == 0.0, e.is_subset_of(&f));
    }

    #[test]
    fn compositions_are_exact((e, f) in mask_pair(64, 14)) {
        prop_assert_eq!(hausdorff(&e, &f).unwrap(), hausdorff(&f, &e).unwrap());
        prop_assert_eq!(
            complementary_hausdorff(&e, &f).unwrap(),
            complementary_hausdorff(&f, &e).unwrap()
        );
        prop_assert_eq!(
            dfront(&e, &f).unwrap(),
            excess(&e, &f).unwrap() + complementary_excess(&f, &e).unwrap()
        );
    }

    #[test]
    fn small_distances_sandwich_the_set((e, f) in mask_pair(64, 14), scale in 0.5f64..4.0) {
        let g = *e.grid();
        let eps = scale * g.spacing();
        if complementary_excess(&f, &e).unwrap() < eps {
            let inner = erode(&f, eps).unwrap();
            prop_assert!(inner.is_subset_of(&e));
        }
        if excess(&e, &f).unwrap() < eps {
            if let Ok(outer) = dilate(&f, eps) {
                prop_assert!(e.is_subset_of(&outer));
            }
        }
        if dfront(&e, &f).unwrap() < eps {
            prop_assert!(erode(&f, eps).unwrap().is_subset_of(&e));
            if let Ok(outer) = dilate(&f, eps) {
                prop_assert!(e.is_subset_of(&outer));
            }
        }
    }

    #[test]
    fn ball_along_the_axis_sits_in_the_cone(
        rho in 0.1f64..1.0,
        theta in 0.1f64..1.5,
        angle in 0.0f64..std::f64::consts::TAU,
        frac in 0.01f64..0.99,
        spacing in 0.002f64..0.05,
    ) {
        let n = [angle.cos(), angle.sin()];
        let t = frac * 0.5 * rho;
        let eps = t * theta.sin();
        let x = [t * n[0], t * n[1]];
        let reach = (eps / spacing).ceil() as i64 + 1;
        let (ci, cj) = ((x[0] / spacing).round() as i64, (x[1] / spacing).round() as i64);
        for j in cj - reach..=cj + reach {
            for i in ci - reach..=ci + reach {
                let y = [i as f64 * spacing, j as f64 * spacing];
                if ((y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2)).sqrt() < eps {
                    prop_assert!(in_cone(y, n, rho, theta), "{y:?}");
                }
            }
        }
    }

    #[test]
    fn random_covers_give_partitions_of_unity((e, _f) in mask_pair(64, 14), r_cells in 1.0f64..4.0) {
        let g = *e.grid();
        let cover = cover_nodes(&g, e.as_slice(), r_cells * g.spacing()).unwrap();
        prop_assert!(cover.covers(e.as_slice()));
        prop_assert!(cover.half_balls_disjoint());
        let family = build_cutoffs(&cover).unwrap();
        prop_assert!(family.partition_residual() <= 1e-12);
    }
}
