//! Eigenpairs of the restricted operator and the stability measures built
//! on them.

mod eigen;
mod stability;

pub use eigen::{
    eigenpairs, rayleigh, EigenBasis, EigenPair, CLUSTER_GAP, DEFAULT_EIGEN_TOL, DENSE_LIMIT,
};
pub use stability::{align_principal, eigenspace_excess, monotonicity_check, MonotonicityReport};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::GridFunction;
    use crate::geometry::{erode, DomainSpec};
    use crate::operator::FracStiffness;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn interval(n: usize, half: f64) -> crate::geometry::DomainMask {
        DomainSpec::Interval { a: -half, b: half }.discretize(n).unwrap()
    }

    #[test]
    fn dense_and_krylov_agree() {
        let m = interval(700, 1.0);
        let op = FracStiffness::assemble(m.grid(), 0.5).unwrap();
        let krylov = eigenpairs(&op, &m, 4, 1e-9).unwrap();
        let dense = {
            let mat = op.restricted_matrix(&m).unwrap();
            let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        };
        for (a, b) in krylov.lambdas().iter().zip(&dense) {
            assert!(((a - b) / b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(krylov.orthogonality_residual < 1e-8);
    }

    #[test]
    fn principal_pair_is_simple_and_positive() {
        let m = interval(256, 1.0);
        let op = FracStiffness::assemble(m.grid(), 0.5).unwrap();
        let basis = eigenpairs(&op, &m, 3, 1e-8).unwrap();
        let l = basis.lambdas();
        assert!(l[1] - l[0] > 0.1 * l[0]);
        assert!(basis.pairs[0].u.restrict(&m).unwrap().iter().all(|v| *v > 0.0));
        assert!((rayleigh(&op, &basis.pairs[0].u).unwrap() - l[0]).abs() < 1e-8 * l[0]);
        assert_eq!(basis.clusters().len(), 3);
    }

    #[test]
    fn min_max_lower_bound() {
        let m = interval(128, 1.0);
        let op = FracStiffness::assemble(m.grid(), 0.4).unwrap();
        let l1 = eigenpairs(&op, &m, 1, 1e-8).unwrap().pairs[0].lambda;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let v: Vec<f64> = (0..m.count()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let u = GridFunction::from_restricted(&m, &v).unwrap();
            let q = rayleigh(&op, &u).unwrap();
            assert!(q >= l1 - 1e-8);
            assert!((rayleigh(&op, &u.scale(-3.0)).unwrap() - q).abs() <= 1e-14 * q);
        }
    }

    #[test]
    fn nested_intervals_are_monotone() {
        let outer = interval(256, 1.0);
        let g = *outer.grid();
        let inner = DomainSpec::Interval { a: -0.5, b: 0.5 }.on_grid(g).unwrap();
        let op = FracStiffness::assemble(&g, 0.5).unwrap();
        let rep = monotonicity_check(&op, &inner, &outer, 5).unwrap();
        assert!(rep.holds);
        assert!(rep.inner.iter().zip(&rep.outer).all(|(a, b)| a > b));
        let same = monotonicity_check(&op, &outer, &outer, 3).unwrap();
        assert_eq!(same.inner, same.outer);
        assert!(monotonicity_check(&op, &outer, &inner, 2).is_err());
    }

    #[test]
    fn excess_extremes() {
        let m = interval(128, 1.0);
        let op = FracStiffness::assemble(m.grid(), 0.5).unwrap();
        let basis = eigenpairs(&op, &m, 4, 1e-9).unwrap();
        let f = basis.functions();
        assert!(eigenspace_excess(&op, &f[..2], &f[..2]).unwrap() < 1e-7);
        // distinct eigenfunctions are energy-orthogonal
        assert!((eigenspace_excess(&op, &f[..1], &f[1..3]).unwrap() - 1.0).abs() < 1e-7);
        let inner = erode(&m, 0.1).unwrap();
        let shrunk = eigenpairs(&op, &inner, 1, 1e-9).unwrap().functions();
        let e = eigenspace_excess(&op, &f[..1], &shrunk).unwrap();
        assert!(e > 0.0 && e < 1.0);
    }

    #[test]
    fn alignment_flips_opposite_sign() {
        let m = interval(128, 1.0);
        let op = FracStiffness::assemble(m.grid(), 0.5).unwrap();
        let p = eigenpairs(&op, &m, 1, 1e-9).unwrap().pairs[0].clone();
        let mut q = p.clone();
        q.u = q.u.scale(-1.0);
        let (_, b) = align_principal(&op, &p, &q).unwrap();
        assert_eq!(b.u.values(), p.u.values());
        let (_, same) = align_principal(&op, &p, &p).unwrap();
        assert_eq!(same.u.values(), p.u.values());
    }
}
