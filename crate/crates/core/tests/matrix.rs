use covproc::matrix::{
    c64, from_real, ginibre, identity, matrix_unit, maximally_entangled_state,
    maximally_entangled_vector, partial_trace, random_states, random_unitary, tensor_product,
    trace_norm, von_neumann_entropy, ComplexMatrix, DensityMatrix, Subsystem,
};
use covproc::channel::{catalog_channel, CatalogChannel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= tol)
}

#[test]
fn kronecker_examples() {
    assert_eq!(tensor_product(&identity(2), &identity(3)), identity(6));
    let z = from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    assert_eq!(tensor_product(&z, &identity(1)), z);
    let e = tensor_product(&matrix_unit(2, 0, 0), &matrix_unit(2, 1, 1));
    assert_eq!(e, matrix_unit(4, 1, 1));
}

#[test]
fn partial_trace_examples() {
    let marginal = partial_trace(&maximally_entangled_state(2), (2, 2), Subsystem::First).unwrap();
    assert!(close(&marginal, &(identity(2) * c64(0.5, 0.0)), 1e-15));
    let wh = catalog_channel(CatalogChannel::WernerHolevo { d: 3 }, 1e-9).unwrap();
    let out = partial_trace(wh.choi_matrix(), (3, 3), Subsystem::Second).unwrap();
    assert!(close(&out, &(identity(3) * c64(1.0 / 3.0, 0.0)), 1e-15));
}

#[test]
fn maximally_entangled_examples() {
    assert_eq!(maximally_entangled_state(1), identity(1));
    let bell = maximally_entangled_state(2);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        assert!((bell[(i, j)] - c64(0.5, 0.0)).norm() < 1e-15);
    }
    assert!((trace_norm(&bell) - 1.0).abs() < 1e-12);

    let omega = maximally_entangled_vector(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let x = ginibre(3, 3, &mut rng);
        let lhs = tensor_product(&x, &identity(3)) * &omega;
        let rhs = tensor_product(&identity(3), &x.transpose()) * &omega;
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn trace_norm_examples() {
    for rho in random_states(4, 5, 1) {
        assert!((trace_norm(rho.matrix()) - 1.0).abs() < 1e-12);
        assert!(trace_norm(&(rho.matrix() - rho.matrix())) == 0.0);
    }
    let diff = matrix_unit(2, 0, 0) - matrix_unit(2, 1, 1);
    assert!((trace_norm(&diff) - 2.0).abs() < 1e-15);
}

#[test]
fn entropy_examples() {
    let pure = DensityMatrix::pure(&maximally_entangled_vector(2));
    assert!(von_neumann_entropy(&pure, 1e-9).unwrap().abs() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(5);
    assert!((von_neumann_entropy(&mixed, 1e-9).unwrap() - 5f64.log2()).abs() < 1e-12);
    let half = DensityMatrix::new(from_real(3, 3, &[0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0]), 1e-9).unwrap();
    assert!((von_neumann_entropy(&half, 1e-9).unwrap() - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trace_norm_is_a_norm(seed in any::<u64>(), scale in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ginibre(4, 4, &mut rng);
        let b = ginibre(4, 4, &mut rng);
        prop_assert!(trace_norm(&(&a + &b)) <= trace_norm(&a) + trace_norm(&b) + 1e-10);
        let scaled = trace_norm(&(&a * c64(scale, 0.0)));
        prop_assert!((scaled - scale.abs() * trace_norm(&a)).abs() <= 1e-10 * (1.0 + scaled));
    }

    #[test]
    fn partial_trace_of_products(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ginibre(4, 4, &mut rng);
        let b = ginibre(4, 4, &mut rng);
        let c = ginibre(2, 2, &mut rng);
        let kept = partial_trace(&tensor_product(&a, &b), (4, 4), Subsystem::First).unwrap();
        prop_assert!(close(&kept, &(&a * b.trace()), 1e-12 * (1.0 + a.norm() * b.norm())));
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!(close(&left, &right, 1e-12 * (1.0 + left.norm())));
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = DensityMatrix::random(d, &mut rng);
        let u = random_unitary(d, &mut rng);
        let rotated = DensityMatrix::new_unchecked(&u * rho.matrix() * u.adjoint());
        let s = von_neumann_entropy(&rho, 1e-9).unwrap();
        prop_assert!((s - von_neumann_entropy(&rotated, 1e-9).unwrap()).abs() <= 1e-10);
    }
}
