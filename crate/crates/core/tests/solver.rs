use fraclab::fit::fit_loglog;
use fraclab::geometry::{dilate, erode, ConeSpec, DomainMask, DomainSpec};
use fraclab::oracles::getoor;
use fraclab::solver::*;
use fraclab::GridFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn interval(n: usize) -> DomainMask {
    DomainSpec::Interval { a: -1.0, b: 1.0 }.discretize(n).unwrap()
}

fn disk(n: usize) -> DomainMask {
    DomainSpec::Ball {
        center: vec![0.0, 0.0],
        radius: 1.0,
    }
    .discretize(n)
    .unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn mirrored_data_gives_mirrored_solutions() {
    for mask in [interval(256), disk(24)] {
        let g = *mask.grid();
        let solver = DirichletSolver::new(&g, 0.6).unwrap();
        let f = GridFunction::from_fn(&mask, |p| 1.0 + p[0] + 0.5 * p[0] * p[1]);
        let mirrored = GridFunction::from_fn(&mask, |p| 1.0 - p[0] - 0.5 * p[0] * p[1]);
        let (u, _) = solver.solve(&mask, &f, TOL).unwrap();
        let (v, _) = solver.solve(&mask, &mirrored, TOL).unwrap();
        let [nx, _] = g.counts();
        let flipped: Vec<f64> = (0..g.len())
            .map(|k| {
                let (i, j) = g.coords(k);
                v.values()[g.index(nx - 1 - i, j)]
            })
            .collect();
        assert!(max_diff(u.values(), &flipped) <= 1e-10 * u.max_abs().max(1.0));
    }
}

#[test]
fn energy_identity_holds() {
    for (mask, s) in [(interval(512), 0.3), (interval(512), 0.8), (disk(24), 0.5)] {
        let solver = DirichletSolver::new(mask.grid(), s).unwrap();
        let f = GridFunction::from_fn(&mask, |p| (3.0 * p[0]).cos() + p[1]);
        let (u, report) = solver.solve(&mask, &f, TOL).unwrap();
        assert!(report.residual <= TOL);
        let energy = solver.operator().form(&u, &u).unwrap();
        let work = f.dot(&u).unwrap();
        assert!((energy - work).abs() <= 10.0 * TOL * work.abs().max(1.0));
        assert!((report.energy_norm.powi(2) - energy).abs() <= 1e-12 * energy);
    }
}

#[test]
fn projection_of_a_larger_solve_is_the_smaller_solve() {
    let big = interval(256);
    let small = erode(&big, 0.2).unwrap();
    let solver = DirichletSolver::new(big.grid(), 0.5).unwrap();
    let f_big = GridFunction::from_fn(&big, |p| 1.0 + p[0] * p[0]);
    let f_small = GridFunction::from_fn(&small, |p| 1.0 + p[0] * p[0]);
    let (u_big, _) = solver.solve(&big, &f_big, TOL).unwrap();
    let (u_small, _) = solver.solve(&small, &f_small, TOL).unwrap();
    let p = solver.project(&u_big, &small, TOL).unwrap();
    let gap = max_diff(p.values(), u_small.values());
    assert!(gap <= 10.0 * TOL * u_small.max_abs().max(1.0));

    // Galerkin orthogonality against random test functions on the target
    let op = solver.operator();
    let diff = u_big.sub(&p).unwrap();
    let scale = op.form(&u_big, &u_big).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let vals: Vec<f64> = (0..small.count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v = GridFunction::from_restricted(&small, &vals).unwrap();
        let norm = op.form(&v, &v).unwrap().sqrt();
        assert!(op.form(&diff, &v).unwrap().abs() <= 10.0 * TOL * norm * scale.sqrt());
    }

    // idempotent and non-expansive
    let pp = solver.project(&p, &small, TOL).unwrap();
    assert!(max_diff(pp.values(), p.values()) <= 1e-8 * p.max_abs());
    let energy = |w: &GridFunction| op.form(w, w).unwrap().sqrt();
    assert!(energy(&p) <= energy(&u_big) + 10.0 * TOL);
}

#[test]
fn zero_and_empty() {
    let m = interval(64);
    let (u, r) = solve_dirichlet(&m, 0.5, &GridFunction::zeros(*m.grid()), TOL).unwrap();
    assert_eq!(u.max_abs(), 0.0);
    assert_eq!(r.iterations, 0);
    let empty = DomainMask::empty(*m.grid());
    assert!(solve_dirichlet(&empty, 0.5, &GridFunction::zeros(*m.grid()), TOL).is_err());
}

#[test]
fn getoor_extension_leaves_the_boundary_layer() {
    let m = interval(1024);
    let spec = ConeSpec::uniform(1, 0.25, std::f64::consts::FRAC_PI_4).unwrap();
    let u = getoor(1, 0.5).unwrap().sample_on(&m);
    let eps = 0.05;
    let out = build_shifted_extension(&u, &m, eps, &spec, default_shift(eps, &spec, m.grid())).unwrap();
    let g = m.grid();
    for k in 0..g.len() {
        if g.point(k)[0].abs() >= 0.95 {
            assert_eq!(out.values()[k], 0.0);
        }
    }
    assert!(out.vanishes_outside(&erode(&m, eps).unwrap()));
}

#[test]
fn extension_errors_shrink_with_eps() {
    let m = interval(2048);
    let spec = ConeSpec::uniform(1, 0.4, 1.5).unwrap();
    let eps = [0.02, 0.04, 0.08, 0.16];
    for s in [0.25, 0.5] {
        let solver = DirichletSolver::new(m.grid(), s).unwrap();
        let (u, _) = solver.solve(&m, &GridFunction::from_fn(&m, |_| 1.0), TOL).unwrap();
        let shifted: Vec<f64> = eps
            .iter()
            .map(|&e| {
                let out = build_shifted_extension(&u, &m, e, &spec, default_shift(e, &spec, m.grid())).unwrap();
                out.sub(&u).unwrap().l2_norm()
            })
            .collect();
        assert!(fit_loglog(&eps, &shifted).unwrap().slope >= s - 0.15);

        let contracted: Vec<f64> = eps
            .iter()
            .map(|&e| {
                let big = dilate(&m, e).unwrap();
                let (w, _) = solver.solve(&big, &GridFunction::from_fn(&big, |_| 1.0), TOL).unwrap();
                let out = build_contracted_extension(&w, &m, e, &spec, default_shift(e, &spec, m.grid())).unwrap();
                assert!(out.vanishes_outside(&m));
                out.sub(&w).unwrap().l2_norm()
            })
            .collect();
        assert!(fit_loglog(&eps, &contracted).unwrap().slope >= s - 0.15);
    }
}
